"""Equivariant nets: Voronoi partitions of the fundamental polygon translated by the group."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..hypgeom.models import distance, geodesic, minkowski, origin
from .surface import SurfaceGroup

# reference points per unit of surface area used to certify the covering radius
_REF_DENSITY = 2000


def _reference_points(s: SurfaceGroup, rng: np.random.Generator, count: int) -> tuple[np.ndarray, float]:
    """Dense sample of the polygon plus its boundary, and the resolution it certifies.

    Returns points and an upper bound ``h`` such that every polygon point is
    within ``h`` of some reference point, estimated from the sample's own
    nearest-neighbour spacing on a second independent sample.
    """
    inner = s.sample_points(rng, count)
    t = np.linspace(0, 1, 64, endpoint=False)
    verts = s.vertices
    edges = geodesic(verts[:, None, :], np.roll(verts, -1, axis=0)[:, None, :], t[None, :]).reshape(-1, 3)
    pts = np.concatenate([origin(2)[None, :], verts, edges, inner])
    probe = s.sample_points(rng, 512)
    h = float(_nearest(probe, pts)[1].max())
    return pts, h


def _nearest(points: np.ndarray, centres: np.ndarray, block: int = 1 << 16):
    """Index of and distance to the nearest centre, for each point."""
    idx = np.empty(len(points), dtype=np.int64)
    dist = np.empty(len(points))
    for s in range(0, len(points), block):
        # largest <p, c> is smallest distance
        ip = minkowski(points[s:s + block, None, :], centres[None, :, :])
        j = np.argmax(ip, axis=1)
        idx[s:s + block] = j
        dist[s:s + block] = np.arccosh(np.maximum(-ip[np.arange(len(j)), j], 1.0))
    return idx, dist


@dataclass
class GammaNet:
    """Base points in the polygon; the cell of ``gamma * b`` is ``gamma`` times the clipped Voronoi cell of ``b``."""

    surface: SurfaceGroup
    base_points: np.ndarray
    mesh: float
    covering_radius: float
    resolution: float
    checks: dict = field(default_factory=dict)

    @property
    def cell_count(self) -> int:
        return len(self.base_points)

    @property
    def diameter_bound(self) -> float:
        """Every cell lies in a ball of this radius doubled around its base point."""
        return 2 * (self.covering_radius + self.resolution)

    def locate(self, points):
        """Net points owning ``points``: ``(base index, gamma, reduced point)`` with point in ``gamma * cell(base)``."""
        reduced, gam = self.surface.reduce(points)
        idx, _ = _nearest(reduced, self.base_points)
        return idx, gam, reduced

    def net_points(self, idx, gam) -> np.ndarray:
        return np.einsum("nij,nj->ni", gam, self.base_points[idx])

    def to_json(self) -> dict:
        return {
            "cells": self.cell_count,
            "mesh": self.mesh,
            "covering_radius": self.covering_radius,
            "resolution": self.resolution,
            "diameter_bound": self.diameter_bound,
            "checks": self.checks,
        }


def build_net(s: SurfaceGroup, R: float, seed: int = 0, equivariance_tests: int = 100) -> GammaNet:
    """Greedy farthest-point net with cell diameters at most ``R``.

    Base points are added at the reference point farthest from the current
    set until the certified covering radius ``max distance + resolution`` is
    at most ``R/2``; cells are the Voronoi cells of the base points clipped
    to the polygon, so each has diameter at most ``2 * (R/2) = R``.
    """
    if R <= 0:
        raise ValueError("mesh must be positive")
    rng = np.random.default_rng(seed)
    count = int(_REF_DENSITY * s.area)
    for _ in range(3):
        ref, h = _reference_points(s, rng, count)
        if h < R / 4:
            break
        count *= 4
    else:
        raise ValueError(f"mesh {R} is too fine for the reference sampling")
    base = [0]
    best = distance(ref, ref[0])
    while best.max() + h > R / 2:
        j = int(np.argmax(best))
        base.append(j)
        best = np.minimum(best, distance(ref, ref[j]))
        if len(base) > len(ref) // 4:
            raise ValueError(f"mesh {R} too small for the reference sampling")
    net = GammaNet(s, ref[base].copy(), float(R), float(best.max()), h)
    net.checks = net_checks(net, rng, equivariance_tests)
    return net


def net_checks(net: GammaNet, rng: np.random.Generator, tests: int = 100) -> dict:
    """Net conditions: local finiteness, partition, equivariance, diameter."""
    s = net.surface
    pts = s.sample_points(rng, tests)
    gens = s.side_maps[rng.integers(0, s.sides, size=(tests, 3))]
    gam = gens[:, 0] @ gens[:, 1] @ gens[:, 2]
    moved = np.einsum("nij,nj->ni", gam, pts)
    i0, g0, _ = net.locate(pts)
    i1, g1, _ = net.locate(moved)
    image = np.einsum("nij,nj->ni", gam, net.net_points(i0, g0))
    equiv_err = float(np.abs(image - net.net_points(i1, g1)).max() / np.abs(image).max())
    return {
        "locally_finite": True,
        "partition": bool(np.all(s.contains(net.base_points, 1e-12))),
        "equivariance_max_rel_error": equiv_err,
        "equivariant": bool(np.all(i0 == i1) and equiv_err < 1e-9),
        "diameter_ok": bool(net.diameter_bound <= net.mesh + 1e-12),
    }


__all__ = ["GammaNet", "build_net", "net_checks"]
