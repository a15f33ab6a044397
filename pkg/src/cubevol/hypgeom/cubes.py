"""Straight cubes in hyperbolic space and their signed volume."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..chains import FacePattern, bits, insert_bit, bit_index
from .models import HPoint, geodesic, geodesic_jet, is_ideal, is_point, minkowski


class StraightCube:
    """Iterated constant-speed geodesic join of ``2**k`` vertices.

    Vertices follow the storage order of :func:`cubevol.chains.bits`.
    Equality and hashing are by exact vertex values, so straight cubes can be
    generators of a :class:`cubevol.chains.FormalChain`.
    """

    kind = "straight"

    def __init__(self, vertices, ideal=None):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2:
            raise ValueError("vertices must be a (2**k, n+1) array")
        count = v.shape[0]
        if count & (count - 1):
            raise ValueError(f"a cube needs 2**k vertices, got {count}")
        if ideal is None:
            ideal = [bool(abs(minkowski(p, p)) < 1e-9) for p in v]
        self.ideal_mask = tuple(bool(b) for b in np.broadcast_to(ideal, (count,)))
        v[list(self.ideal_mask)] /= v[list(self.ideal_mask), -1:]
        v.setflags(write=False)
        self.vertices = v
        self._key = tuple(v.ravel().tolist())

    @classmethod
    def from_points(cls, points) -> "StraightCube":
        return cls([p.array for p in points], [p.ideal for p in points])

    @property
    def dim(self) -> int:
        return self.vertices.shape[0].bit_length() - 1

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1] - 1

    @property
    def is_ideal(self) -> bool:
        return any(self.ideal_mask)

    def points(self) -> list[HPoint]:
        return [HPoint.from_array(p, i) for p, i in zip(self.vertices, self.ideal_mask)]

    def vertex(self, b) -> np.ndarray:
        return self.vertices[bit_index(b)]

    def face(self, p: FacePattern) -> "StraightCube":
        k = self.dim
        if not 1 <= p.j <= k:
            raise IndexError(f"face {p} out of range for a {k}-cube")
        idx = [bit_index(insert_bit(b, p.j, p.i)) for b in bits(k - 1)]
        return StraightCube(self.vertices[idx], [self.ideal_mask[i] for i in idx])

    def boundary_terms(self):
        for j in range(1, self.dim + 1):
            for i in (0, 1):
                yield self.face(FacePattern(j, i)), (-1) ** (j + i)

    def is_degenerate(self) -> bool:
        return any(self.face(FacePattern(j, 0)) == self.face(FacePattern(j, 1))
                   for j in range(1, self.dim + 1))

    def sort_key(self):
        return (2, self._key)

    def __eq__(self, other):
        return isinstance(other, StraightCube) and self._key == other._key \
            and self.vertices.shape == other.vertices.shape

    def __hash__(self):
        return hash((self.vertices.shape, self._key))

    def __repr__(self):
        return f"StraightCube(dim={self.dim}, n={self.ambient_dim})"

    def _require_finite(self):
        if self.is_ideal:
            raise ValueError("ideal cubes cannot be evaluated; truncate them first")
        if not is_point(self.vertices, 1e-9):
            raise ValueError("cube vertices are not on the hyperboloid")

    def evaluate(self, t) -> np.ndarray:
        """Evaluate at parameters ``t`` of shape ``(k,)`` or ``(N, k)``."""
        self._require_finite()
        t = np.asarray(t, dtype=float)
        single = t.ndim == 1
        t = np.atleast_2d(t)
        k = self.dim
        if t.shape[1] != k:
            raise ValueError(f"expected {k} parameters, got {t.shape[1]}")
        if k == 0:
            out = np.repeat(self.vertices, t.shape[0], axis=0)
            return out[0] if single else out
        # axis a of the reshaped array is the bit of coordinate a+1
        layer = self.vertices.reshape((2,) * k + (1, -1))
        for a in range(k):
            layer = geodesic(layer[0], layer[1], t[:, a])
        return layer[0] if single else layer

    def evaluate_jet(self, t):
        """Points and parameter derivatives: shapes ``(N, n+1)`` and ``(N, n+1, k)``."""
        self._require_finite()
        t = np.atleast_2d(np.asarray(t, dtype=float))
        k = self.dim
        N = t.shape[0]
        m = self.vertices.shape[1]
        pts = np.broadcast_to(self.vertices.reshape((2,) * k + (1, m)), (2,) * k + (N, m)).copy()
        jet = np.zeros((2,) * k + (N, m, k))
        for a in range(k):
            pts, jet = geodesic_jet(pts[0], jet[0], pts[1], jet[1], t[:, a], a)
        return pts, jet


def geodesic_point(x: HPoint, y: HPoint, t: float) -> HPoint:
    if x.ideal or y.ideal:
        raise ValueError("geodesic needs finite endpoints")
    return HPoint.from_array(geodesic(x.array, y.array, t))


def straight_cube_eval(c: StraightCube, t) -> np.ndarray:
    return c.evaluate(t)


# -- signed volume -------------------------------------------------------------


@dataclass(frozen=True)
class VolumeResult:
    value: float
    error_estimate: float
    signed: bool = True
    depth: int = 0
    converged: bool = True

    @property
    def volume(self) -> float:
        return abs(self.value)


@lru_cache(maxsize=None)
def _gauss_nodes(order: int, depth: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1) / 2
    w = w / 2
    m = 2 ** depth
    nodes = ((np.arange(m)[:, None] + x[None, :]) / m).ravel()
    weights = np.tile(w / m, m)
    return nodes, weights


def _pairwise_sum(a: np.ndarray) -> float:
    # fixed-shape reduction tree, deterministic for a given input length
    a = np.asarray(a, dtype=float)
    while a.size > 1:
        if a.size % 2:
            a = np.append(a, 0.0)
        a = a[0::2] + a[1::2]
    return float(a[0]) if a.size else 0.0


def volume_density(c: StraightCube, t) -> np.ndarray:
    """Signed density of the pulled-back volume form at parameters ``t``.

    ``det[d_1 c, ..., d_n c, c]`` is the hyperbolic volume form evaluated on
    the coordinate tangent vectors, positive for the standard orientation at
    the origin.
    """
    pts, jet = c.evaluate_jet(t)
    mat = np.concatenate([jet, pts[..., None]], axis=-1)
    return np.linalg.det(mat)


def _quadrature(c: StraightCube, order: int, depth: int, chunk: int = 1 << 15) -> float:
    n = c.dim
    nodes, weights = _gauss_nodes(order, depth)
    M = nodes.size
    total_points = M ** n
    partial = []
    for start in range(0, total_points, chunk):
        idx = np.arange(start, min(start + chunk, total_points))
        digits = np.stack(np.unravel_index(idx, (M,) * n), axis=-1)
        t = nodes[digits]
        w = np.prod(weights[digits], axis=-1)
        partial.append(_pairwise_sum(w * volume_density(c, t)))
    return _pairwise_sum(np.array(partial))


def signed_volume(c: StraightCube, order: int = 8, depth: int | None = None,
                  tol: float = 1e-8, max_depth: int = 5) -> VolumeResult:
    """Signed volume by tensor Gauss-Legendre quadrature on dyadic subcubes.

    With ``depth`` given, integrates at that depth and estimates the error by
    comparison with ``depth - 1``.  Otherwise the depth grows from 1 until
    the estimate drops below ``tol`` or ``max_depth`` is reached; a result
    that misses ``tol`` is returned with ``converged=False``.
    """
    if c.dim != c.ambient_dim:
        raise ValueError("signed volume needs an n-cube in n-dimensional space")
    if depth is not None:
        value = _quadrature(c, order, depth)
        prev = _quadrature(c, order, depth - 1) if depth > 0 else value
        err = abs(value - prev)
        return VolumeResult(value, err, True, depth, err <= tol)
    prev = _quadrature(c, order, 0)
    for d in range(1, max_depth + 1):
        value = _quadrature(c, order, d)
        err = abs(value - prev)
        if err <= tol:
            return VolumeResult(value, err, True, d, True)
        prev = value
    return VolumeResult(value, err, True, max_depth, False)


def signed_area_triangle(x, y, z):
    """Signed area of geodesic triangles in the hyperboloid model of H^2."""
    x, y, z = (np.asarray(a, dtype=float) for a in (x, y, z))
    det = np.linalg.det(np.stack([x, y, z], axis=-1))
    denom = 1 - minkowski(x, y) - minkowski(y, z) - minkowski(z, x)
    return 2 * np.arctan2(det, denom)


def signed_area_quad(v00, v01, v10, v11):
    """Signed area of a straight 2-cube from its boundary loop v00-v10-v11-v01."""
    return signed_area_triangle(v00, v10, v11) + signed_area_triangle(v00, v11, v01)


def ideal_check(vertices) -> bool:
    return is_ideal(vertices)


__all__ = [
    "StraightCube",
    "VolumeResult",
    "geodesic_point",
    "signed_area_quad",
    "signed_area_triangle",
    "signed_volume",
    "straight_cube_eval",
    "volume_density",
]
