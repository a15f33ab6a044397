"""Hyperboloid, Klein and ball models of hyperbolic space.

Points are arrays whose last axis holds hyperboloid coordinates
``(x_1, ..., x_n, x_0)`` with the time-like coordinate last, so that
``<x, x> = -1`` and ``x_0 > 0``.  Ideal points are future null vectors
scaled to ``x_0 = 1``.  All functions broadcast over leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

POINT_TOL = 1e-12


def minkowski(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.sum(x[..., :-1] * y[..., :-1], axis=-1) - x[..., -1] * y[..., -1]


def origin(n: int) -> np.ndarray:
    o = np.zeros(n + 1)
    o[-1] = 1.0
    return o


def normalize(x):
    """Rescale a time-like vector onto the upper sheet of the hyperboloid."""
    x = np.asarray(x, dtype=float)
    return x / np.sqrt(-minkowski(x, x))[..., None]


def is_point(x, tol: float = POINT_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(minkowski(x, x) + 1) <= tol * np.maximum(1, x[..., -1] ** 2))
                and np.all(x[..., -1] > 0))


def is_ideal(x, tol: float = POINT_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(minkowski(x, x)) <= tol) and np.all(x[..., -1] > 0))


def to_klein(x):
    x = np.asarray(x, dtype=float)
    return x[..., :-1] / x[..., -1:]


def from_klein(k):
    k = np.asarray(k, dtype=float)
    s = 1.0 / np.sqrt(1.0 - np.sum(k * k, axis=-1, keepdims=True))
    return np.concatenate([k * s, s], axis=-1)


def to_ball(x):
    x = np.asarray(x, dtype=float)
    return x[..., :-1] / (1.0 + x[..., -1:])


def from_ball(b):
    b = np.asarray(b, dtype=float)
    r2 = np.sum(b * b, axis=-1, keepdims=True)
    return np.concatenate([2 * b, 1 + r2], axis=-1) / (1 - r2)


def ideal_from_direction(u):
    """Ideal point of the boundary sphere in direction ``u`` (ball/Klein coordinates)."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    return np.concatenate([u, np.ones(u.shape[:-1] + (1,))], axis=-1)


def point_at(direction, r):
    """Point at distance ``r`` from the origin along the unit ``direction``."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    r = np.asarray(r, dtype=float)[..., None]
    return np.concatenate([np.sinh(r) * u, np.cosh(r)], axis=-1)


def distance(x, y):
    """Hyperbolic distance, via the chord ``<x-y, x-y> = 4 sinh^2(d/2)``."""
    w = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    q = np.maximum(minkowski(w, w), 0.0)
    return 2.0 * np.arcsinh(0.5 * np.sqrt(q))


@dataclass(frozen=True)
class HPoint:
    coords: tuple[float, ...]
    ideal: bool = False

    def __post_init__(self):
        x = np.asarray(self.coords, dtype=float)
        ok = is_ideal(x, 1e-9) if self.ideal else is_point(x, 1e-9)
        if not ok:
            kind = "ideal" if self.ideal else "finite"
            raise ValueError(f"{self.coords} is not a valid {kind} hyperboloid point")

    @classmethod
    def from_array(cls, x, ideal: bool = False) -> "HPoint":
        x = np.asarray(x, dtype=float)
        if ideal:
            x = x / x[-1]
        return cls(tuple(float(v) for v in x), ideal)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def to_json(self) -> dict:
        """``{"coords": [x0, x1, ..., xn], "ideal": bool}`` with the time-like x0 first."""
        return {"coords": [self.coords[-1], *self.coords[:-1]], "ideal": self.ideal}

    @classmethod
    def from_json(cls, data) -> "HPoint":
        if isinstance(data, dict):
            coords, ideal = data["coords"], bool(data.get("ideal", False))
        else:
            coords, ideal = data, False
        coords = [float(a) for a in coords]
        return cls.from_array(coords[1:] + coords[:1], ideal)


# -- geodesics ---------------------------------------------------------------

_SMALL_D = 0.05


def _coeffs(u, d):
    """g = sinh(ud)/sinh d, its u-derivative, and h = (dg/dd)/sinh d."""
    u, d = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(d, dtype=float))
    small = d < _SMALL_D
    ds = np.where(small, _SMALL_D, d)
    sh, ch = np.sinh(ds), np.cosh(ds)
    shu, chu = np.sinh(u * ds), np.cosh(u * ds)
    g = shu / sh
    gu = ds * chu / sh
    h = (u * chu * sh - shu * ch) / sh**3
    if np.any(small):
        d2 = np.where(small, d, 0.0) ** 2
        u2 = u * u
        w = u * (u2 - 1)
        g_s = u + d2 * (w / 6 + d2 * (w * (3 * u2 - 7) / 360 + d2 * w * (3 * u2**2 - 18 * u2 + 31) / 15120))
        gu_s = 1 + d2 * ((3 * u2 - 1) / 6 + d2 * ((15 * u2**2 - 30 * u2 + 7) / 360
                                                  + d2 * (21 * u2**3 - 105 * u2**2 + 147 * u2 - 31) / 15120))
        v = w * (u2 - 4)
        h_s = w / 3 + d2 * (v / 30 + d2 * (v * (3 * u2 - 20) / 2520 + d2 * v * (5 * u2**2 - 80 * u2 + 336) / 226800))
        g = np.where(small, g_s, g)
        gu = np.where(small, gu_s, gu)
        h = np.where(small, h_s, h)
    return g, gu, h


def geodesic(x, y, t):
    """Constant-speed geodesic from ``x`` (t=0) to ``y`` (t=1)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    d = distance(x, y)
    g1, _, _ = _coeffs(1 - t, d)
    g2, _, _ = _coeffs(t, d)
    return g1[..., None] * x + g2[..., None] * y


def geodesic_jet(x, dx, y, dy, t, axis: int):
    """Geodesic point and its derivatives along a batch of parameters.

    ``dx``/``dy`` have shape ``x.shape + (k,)`` (derivatives of the endpoints
    with respect to k parameters); ``t`` is the join parameter, itself
    parameter number ``axis``.  Returns ``(r, dr)``.
    """
    d = distance(x, y)
    g1, gu1, h1 = _coeffs(1 - t, d)
    g2, gu2, h2 = _coeffs(t, d)
    r = g1[..., None] * x + g2[..., None] * y
    # d<x,y>: derivative of a = -<x,y> along each parameter
    xm = x.copy()
    xm[..., -1] *= -1
    ym = y.copy()
    ym[..., -1] *= -1
    da = -(np.einsum("...i,...ik->...k", ym, dx) + np.einsum("...i,...ik->...k", xm, dy))
    dr = g1[..., None, None] * dx + g2[..., None, None] * dy
    dr += (h1[..., None] * x + h2[..., None] * y)[..., None] * da[..., None, :]
    dr[..., axis] += -gu1[..., None] * x + gu2[..., None] * y
    return r, dr
