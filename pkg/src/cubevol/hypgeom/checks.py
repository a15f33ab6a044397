"""Sampled geometric identities of straight cubes: diameter, hull containment, flat faces."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from ..chains import FacePattern
from .cubes import StraightCube
from .models import distance, to_klein


def parameter_grid(k: int, size: int = 17) -> np.ndarray:
    """All points of the regular ``size**k`` grid in [0,1]^k, shape ``(size**k, k)``."""
    axes = [np.linspace(0.0, 1.0, size)] * k
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)


def vertex_diameter(c: StraightCube) -> float:
    """Largest distance between two vertices; equals the diameter of the cube's image."""
    v = c.vertices
    return float(distance(v[:, None, :], v[None, :, :]).max())


@dataclass(frozen=True)
class DiameterReport:
    value: float
    grid_max: float
    grid_size: int
    ok: bool


def diameter(c: StraightCube, grid: int | None = None, tol: float = 1e-8):
    """Diameter of a finite straight cube.

    Without ``grid`` returns the vertex diameter.  With ``grid`` the value is
    also compared against all pairwise distances of a ``grid**k`` sample of
    the cube, which must not exceed it by more than ``tol``.
    """
    value = vertex_diameter(c)
    if grid is None:
        return value
    pts = c.evaluate(parameter_grid(c.dim, grid))
    grid_max = _max_pairwise(pts)
    return DiameterReport(value, grid_max, grid, bool(grid_max <= value + tol))


def _max_pairwise(pts: np.ndarray, block: int = 1024) -> float:
    # the largest distance is attained on the Klein-model hull, so test hull points only
    k = to_klein(pts)
    if len(pts) > 4 * block:
        try:
            pts = pts[ConvexHull(k).vertices]
        except (QhullError, ValueError):
            pass
    best = 0.0
    for s in range(0, len(pts), block):
        d = distance(pts[s:s + block, None, :], pts[None, :, :])
        best = max(best, float(d.max()))
    return best


def points_in_hull(vertices: np.ndarray, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Membership of Euclidean ``points`` in the convex hull of ``vertices``."""
    vertices = np.asarray(vertices, dtype=float)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    try:
        hull = ConvexHull(vertices)
    except (QhullError, ValueError):
        return np.array([_in_hull_lp(vertices, p, tol) for p in points])
    eq = hull.equations
    return np.all(points @ eq[:, :-1].T + eq[:, -1] <= tol, axis=1)


def _in_hull_lp(vertices: np.ndarray, p: np.ndarray, tol: float) -> bool:
    # minimise the l1 gap |sum w_i v_i - p| over convex weights w
    m, d = vertices.shape
    c = np.concatenate([np.zeros(m), np.ones(2 * d)])
    A_eq = np.block([
        [vertices.T, np.eye(d), -np.eye(d)],
        [np.ones((1, m)), np.zeros((1, 2 * d))],
    ])
    b_eq = np.concatenate([p, [1.0]])
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return bool(res.status == 0 and res.fun <= tol)


def hull_containment(c: StraightCube, grid: int = 17, samples=None, tol: float = 1e-9) -> bool:
    """Whether sampled cube points lie in the convex hull of the vertices.

    Hyperbolic convex hulls are Euclidean convex hulls in the Klein model.
    ``samples`` (hyperboloid points) replaces the parameter grid when given.
    """
    if samples is None:
        samples = c.evaluate(parameter_grid(c.dim, grid))
    inside = points_in_hull(to_klein(c.vertices), to_klein(np.atleast_2d(samples)), tol)
    return bool(np.all(inside))


@dataclass(frozen=True)
class GeodesicTestReport:
    is_geodesic: bool
    residuals: np.ndarray

    def to_json(self) -> dict:
        return {"is_geodesic": self.is_geodesic, "residuals": self.residuals.tolist()}


def hyperplane_residual(points: np.ndarray) -> float:
    """Deviation of points from the best-fit linear hyperplane of Minkowski space.

    Rows are scaled to unit length; the normal is the right singular vector
    of the smallest singular value.
    """
    x = np.asarray(points, dtype=float)
    x = x / np.linalg.norm(x, axis=-1, keepdims=True)
    if x.shape[0] < x.shape[1]:
        # fewer points than ambient dimensions always fit a hyperplane
        return 0.0
    _, _, vt = np.linalg.svd(x)
    return float(np.abs(x @ vt[-1]).max())


def geodesic_test(c: StraightCube, tol: float = 1e-9) -> GeodesicTestReport:
    """Check that every codimension-one face lies in a hyperbolic hyperplane."""
    n = c.dim
    if n < 2 or n != c.ambient_dim:
        raise ValueError("geodesic test needs an n-cube in H^n with n >= 2")
    res = np.array([
        hyperplane_residual(c.face(FacePattern(j, i)).vertices)
        for j in range(1, n + 1) for i in (0, 1)
    ])
    return GeodesicTestReport(bool(np.all(res < tol)), res)


__all__ = [
    "DiameterReport",
    "GeodesicTestReport",
    "diameter",
    "geodesic_test",
    "hull_containment",
    "hyperplane_residual",
    "parameter_grid",
    "points_in_hull",
    "vertex_diameter",
]
