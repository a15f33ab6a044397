"""Lobachevsky-function volumes of ideal tetrahedra and truncated ideal cubes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from ..chains import bits
from ..cube2simplex import T_DATA
from .cubes import StraightCube
from .models import ideal_from_direction, is_ideal, point_at

_SERIES_TERMS = 40


@lru_cache(maxsize=1)
def _clausen_coeffs() -> np.ndarray:
    # |B_2k| / (2k (2k+1)!) for k = 1.._SERIES_TERMS
    b = np.abs(bernoulli(2 * _SERIES_TERMS)[2::2])
    return np.array([b[k - 1] / (2 * k * math.factorial(2 * k + 1)) for k in range(1, _SERIES_TERMS + 1)])


def clausen(x):
    """Clausen function Cl_2(x) = sum sin(m x)/m^2.

    Evaluated on the representative of ``x`` in [-pi, pi] by the Bernoulli
    expansion ``x - x log|x| + sum |B_2k| x^(2k+1) / (2k (2k+1)!)``, whose
    terms decay like 4^-k there; 40 terms leave a tail far below 1e-16.
    """
    x = np.asarray(x, dtype=float)
    r = np.remainder(x + np.pi, 2 * np.pi) - np.pi
    out = np.zeros_like(r)
    nz = r != 0
    rr = r[nz]
    powers = rr[..., None] ** (2 * np.arange(1, _SERIES_TERMS + 1) + 1)
    out[nz] = rr - rr * np.log(np.abs(rr)) + powers @ _clausen_coeffs()
    return out if out.ndim else float(out)


def lobachevsky(theta):
    """Lobachevsky function -int_0^theta log|2 sin t| dt = Cl_2(2 theta)/2."""
    return 0.5 * clausen(2 * np.asarray(theta, dtype=float))


def ideal_tetra_volume(alpha: float, beta: float, gamma: float, tol: float = 1e-9) -> float:
    """Volume of the ideal tetrahedron with dihedral angles alpha, beta, gamma."""
    if min(alpha, beta, gamma) < 0:
        raise ValueError("dihedral angles must be non-negative")
    if abs(alpha + beta + gamma - math.pi) > tol:
        raise ValueError(f"dihedral angles must sum to pi, got {alpha + beta + gamma!r}")
    return float(lobachevsky(alpha) + lobachevsky(beta) + lobachevsky(gamma))


V3_TETRA = 3 * float(lobachevsky(math.pi / 3))


def _stereographic(u: np.ndarray) -> complex:
    # projection of the unit sphere from (0, 0, 1) to the plane z = 0
    return complex(u[0], u[1]) / (1 - u[2])


def _triangle_angles(a: complex, b: complex, c: complex) -> tuple[float, float, float]:
    def angle(p, q, r):
        return abs(math.atan2(((q - p) / (r - p)).imag, ((q - p) / (r - p)).real))

    return angle(a, b, c), angle(b, c, a), angle(c, a, b)


def ideal_tetra_angles(directions) -> tuple[float, float, float]:
    """Dihedral angles of the ideal tetrahedron on four boundary directions.

    A Moebius map sends the first vertex to infinity; the other three then
    span a Euclidean triangle whose angles are the dihedral angles along
    the edges at infinity.
    """
    u = np.asarray(directions, dtype=float)
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    z = [_stereographic(p) for p in u]
    w = [1 / (zk - z[0]) for zk in z[1:]]
    return _triangle_angles(*w)


def ideal_tetra_volume_from_vertices(directions) -> float:
    a, b, c = ideal_tetra_angles(directions)
    return ideal_tetra_volume(a, b, c, tol=1e-7)


def regular_ideal_cube_directions(n: int = 3) -> np.ndarray:
    """Vertex ``b`` of the regular ideal n-cube points along ``(2b - 1)/sqrt(n)``."""
    return np.array([[2 * x - 1 for x in b] for b in bits(n)], dtype=float) / math.sqrt(n)


def regular_ideal_cube(n: int = 3) -> StraightCube:
    dirs = regular_ideal_cube_directions(n)
    return StraightCube(ideal_from_direction(dirs), [True] * len(dirs))


@dataclass(frozen=True)
class CoxeterReport:
    volumes: tuple[float, ...]
    angles: tuple[tuple[float, float, float], ...]
    total: float
    reference: float = V3_TETRA

    @property
    def max_deviation(self) -> float:
        return max(abs(v - self.reference) for v in self.volumes)

    def to_json(self) -> dict:
        return {
            "volumes": list(self.volumes),
            "angles": [list(a) for a in self.angles],
            "total": self.total,
            "v3_tetra": self.reference,
            "max_deviation": self.max_deviation,
        }


def coxeter_check() -> CoxeterReport:
    """Split the regular ideal 3-cube along the five-tetrahedron pattern."""
    dirs = regular_ideal_cube_directions(3)
    vols, angs = [], []
    for _, corners in T_DATA[3]:
        idx = [sum(1 << (3 - i) for i in s) for s in corners]
        a = ideal_tetra_angles(dirs[idx])
        angs.append(a)
        vols.append(ideal_tetra_volume(*a, tol=1e-7))
    return CoxeterReport(tuple(vols), tuple(angs), math.fsum(vols))


def truncate_ideal_cube(directions, L: float) -> StraightCube:
    """Finite straight cube whose vertices sit at distance ``L`` along the ideal rays.

    ``directions`` are either unit vectors of the boundary sphere or ideal
    hyperboloid points (null vectors), one per cube vertex.
    """
    if isinstance(directions, StraightCube):
        directions = directions.vertices
    d = np.asarray(directions, dtype=float)
    if d.ndim != 2:
        raise ValueError("expected one direction per vertex")
    if L < 0:
        raise ValueError("truncation length must be non-negative")
    if is_ideal(d, 1e-9):
        d = d[:, :-1] / d[:, -1:]
    d = d / np.linalg.norm(d, axis=-1, keepdims=True)
    rounded = {tuple(np.round(p, 12)) for p in d}
    if len(rounded) != len(d):
        raise ValueError("ideal vertex directions must be distinct")
    return StraightCube(point_at(d, np.full(len(d), float(L))))


__all__ = [
    "CoxeterReport",
    "V3_TETRA",
    "clausen",
    "coxeter_check",
    "ideal_tetra_angles",
    "ideal_tetra_volume",
    "ideal_tetra_volume_from_vertices",
    "lobachevsky",
    "regular_ideal_cube",
    "regular_ideal_cube_directions",
    "truncate_ideal_cube",
]
