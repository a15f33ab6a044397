"""Closed hyperbolic surfaces from regular 4g-gons.

Isometries of H^2 are 3x3 matrices preserving the Minkowski form
``diag(1, 1, -1)`` and acting on column vectors of hyperboloid
coordinates (time-like coordinate last).  Batches of points are stored
as rows, so ``g`` acts on them as ``points @ g.T``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..hypgeom.models import minkowski, origin, point_at

ETA = np.diag([1.0, 1.0, -1.0])


def inverse(g: np.ndarray) -> np.ndarray:
    """Inverse of a Lorentz matrix, ``eta g^T eta``."""
    return ETA @ np.swapaxes(g, -1, -2) @ ETA


def rotation(theta) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    out = np.zeros(np.shape(theta) + (3, 3), dtype=np.result_type(c, float))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


def boost(r) -> np.ndarray:
    """Translation by ``r`` along the first spatial axis."""
    c, s = np.cosh(r), np.sinh(r)
    out = np.zeros(np.shape(r) + (3, 3), dtype=np.result_type(c, float))
    out[..., 0, 0] = c
    out[..., 0, 2] = s
    out[..., 2, 0] = s
    out[..., 2, 2] = c
    out[..., 1, 1] = 1.0
    return out


REFLECTION = np.diag([1.0, -1.0, 1.0])


@dataclass
class SurfaceGroup:
    """Surface group of genus ``g`` acting on H^2 with a regular 4g-gon as fundamental domain.

    ``generators`` lists ``a_1, b_1, ..., a_g, b_g``; ``side_maps[s]`` sends
    the polygon to its neighbour across side ``s`` (from vertex ``s`` to
    vertex ``s + 1``).
    """

    genus: int
    generators: list[np.ndarray]
    side_maps: np.ndarray
    vertices: np.ndarray
    area: float
    circumradius: float
    inradius: float
    _neighbours: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._neighbours = self.side_maps @ origin(2)

    @property
    def sides(self) -> int:
        return 4 * self.genus

    @property
    def vertex_angle(self) -> float:
        return 2 * math.pi / self.sides

    def relator(self) -> np.ndarray:
        """Product of a_i b_i^-1 a_i^-1 b_i over i, in extended precision.

        The product is ill-conditioned (entries of the partial products grow
        like cosh(2 * inradius)^k), so float64 generators lose digits with
        the genus; the generators are rebuilt in long double for this check.
        """
        gens = _generators(self.genus, np.longdouble)
        out = np.eye(3, dtype=np.longdouble)
        for i in range(self.genus):
            a, b = gens[2 * i], gens[2 * i + 1]
            out = out @ a @ inverse(b) @ inverse(a) @ b
        return out

    def relator_residual(self) -> float:
        return float(np.abs(self.relator() - np.eye(3, dtype=np.longdouble)).max())

    def excess(self, points) -> np.ndarray:
        """Per side, how much closer a point is to the neighbouring centre than to the origin.

        Positive entries mean the point lies beyond that side.
        """
        pts = np.asarray(points, dtype=float)
        return minkowski(pts[..., None, :], self._neighbours) - minkowski(pts, origin(2))[..., None]

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        return np.all(self.excess(points) <= tol, axis=-1)

    def reduce(self, points, max_steps: int = 200):
        """Move points into the polygon.

        Returns ``(reduced, gammas)`` with ``points = gammas @ reduced``.
        Each step crosses the side that the point violates most; since the
        polygon is the Dirichlet domain of the origin, distance to the origin
        strictly drops at every step.
        """
        pts = np.array(points, dtype=float)
        gam = np.broadcast_to(np.eye(3), pts.shape[:-1] + (3, 3)).copy()
        inv_maps = inverse(self.side_maps)
        active = np.arange(pts.shape[0])
        for _ in range(max_steps):
            if active.size == 0:
                return pts, gam
            ex = self.excess(pts[active])
            side = np.argmax(ex, axis=-1)
            out = ex[np.arange(active.size), side] > 0
            active, side = active[out], side[out]
            if active.size == 0:
                return pts, gam
            pts[active] = np.einsum("nij,nj->ni", inv_maps[side], pts[active])
            gam[active] = gam[active] @ self.side_maps[side]
        raise RuntimeError("point reduction did not terminate")

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Points uniform with respect to hyperbolic area in the polygon."""
        out = []
        have = 0
        ch = math.cosh(self.circumradius)
        while have < count:
            m = int((count - have) * 1.3) + 16
            r = np.arccosh(1 + rng.random(m) * (ch - 1))
            phi = rng.random(m) * 2 * math.pi
            p = point_at(np.stack([np.cos(phi), np.sin(phi)], axis=-1), r)
            p = p[self.contains(p)]
            out.append(p)
            have += len(p)
        return np.concatenate(out)[:count]


def _generators(g: int, dtype) -> list[np.ndarray]:
    """Pairings of side k+2 onto side k for k = 0, 1 mod 4, in the given float type."""
    n = 4 * g
    pi = np.arccos(dtype(-1))
    # right triangle centre/vertex/side midpoint: cosh(inradius) = cot(pi/n)
    inr = np.arccosh(1 / np.tan(pi / n))
    mid = 2 * pi * (np.arange(n, dtype=dtype) + dtype(0.5)) / n
    out = []
    for k in range(n):
        if k % 4 in (0, 1):
            # turn side k+2 to face away from side k, then translate across side k;
            # this carries vertex k+2 to k+1 and k+3 to k
            out.append(rotation(mid[k]) @ boost(2 * inr) @ rotation(pi - mid[(k + 2) % n]))
    return out


def build_surface(g: int) -> SurfaceGroup:
    """Regular 4g-gon with vertex angles 2*pi/4g and the side pairing a b a^-1 b^-1."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    n = 4 * g
    cot = 1 / math.tan(math.pi / n)
    rc = math.acosh(cot * cot)
    verts = np.array([point_at([math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)], rc)
                      for k in range(n)])
    side_maps = np.zeros((n, 3, 3))
    gens = _generators(g, np.float64)
    for i, m in enumerate(gens):
        k = 4 * (i // 2) + i % 2
        side_maps[k] = m
        side_maps[(k + 2) % n] = inverse(m)
    area = (n - 2) * math.pi - n * (2 * math.pi / n)
    return SurfaceGroup(g, gens, side_maps, verts, area, rc, math.acosh(cot))


__all__ = [
    "ETA",
    "REFLECTION",
    "SurfaceGroup",
    "boost",
    "build_surface",
    "inverse",
    "rotation",
]
