"""Monte-Carlo smearing of a model quadrilateral over a closed hyperbolic surface.

Isometries ``g`` of H^2 are sampled from Haar measure on a fundamental
domain of the surface group in the full isometry group: a base point
uniform by area in the polygon, a uniform rotation and a fair orientation
bit.  Each sample moves the four model vertices, which are then assigned
to net points; the resulting straight quadrilateral (up to the group
action) is one term of the smeared chain.  The Haar measure is normalised
so that each orientation class has total mass equal to the surface area.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..hypgeom.cubes import signed_area_quad
from ..hypgeom.models import distance, point_at
from .net import GammaNet
from .surface import REFLECTION, SurfaceGroup, boost, inverse, rotation

V2_CUBE = 2 * math.pi
BATCHES = 16

# vertex pairs of the four edges of a 2-cube, in storage order v00, v01, v10, v11,
# with the boundary sign (-1)^(j+i) of face (j, i)
EDGES = (((0, 1), 1), ((2, 3), -1), ((0, 2), -1), ((1, 3), 1))


@dataclass(frozen=True)
class ModelQuadrilateral:
    """Truncated ideal square: vertices at distance ``L`` from the origin, counter-clockwise."""

    L: float
    theta0: float = 0.0

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("truncation must be positive")

    @property
    def vertices(self) -> np.ndarray:
        """Vertices in storage order v00, v01, v10, v11 (boundary loop v00, v10, v11, v01)."""
        turns = np.array([0.0, 3.0, 1.0, 2.0]) * math.pi / 2 + self.theta0
        return point_at(np.stack([np.cos(turns), np.sin(turns)], axis=-1), np.full(4, self.L))

    @property
    def area(self) -> float:
        return float(signed_area_quad(*self.vertices))

    @property
    def defect(self) -> float:
        """Gap ``2*pi - area`` to the ideal square."""
        return V2_CUBE - self.area

    def to_json(self) -> dict:
        return {"L": self.L, "theta0": self.theta0, "area": self.area, "defect": self.defect}


def smearing_bound(surface_area: float, quad_area: float) -> float:
    """``area(S) / (v - 2 eps)`` with ``v = 2*pi`` and ``eps = v - quad_area``."""
    eps = V2_CUBE - quad_area
    if not 0 < V2_CUBE - 2 * eps:
        raise ValueError(f"model area {quad_area} must exceed pi")
    return surface_area / (V2_CUBE - 2 * eps)


@dataclass
class SmearEstimate:
    """Orbit-level smearing coefficients with batch-means error bars."""

    term_keys: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    l1_estimate: float
    l1_stderr: float
    total_mass: float
    boundary_residual: float
    residual_stderr: float
    edge_classes: int
    implied_bound: float
    implied_bound_stderr: float
    coherence_violations: int
    max_vertex_diameter: float
    samples: int
    seed: int
    surface_area: float
    config: dict = field(default_factory=dict)
    sample_areas: np.ndarray | None = field(default=None, repr=False)

    @property
    def classes(self) -> int:
        return len(self.a_plus)

    @property
    def relative_residual(self) -> float:
        return self.boundary_residual / self.l1_estimate

    def sampled_terms(self) -> dict:
        """Map from orbit key to ``(a+, a-)``.

        A key is ``(b_0, b_1, b_2, b_3, p_1, q_1, p_2, q_2, p_3, q_3)``: base
        point indices of the four net points and rounded spatial coordinates
        of ``gamma_0^-1 gamma_k O`` for k = 1..3.
        """
        return {tuple(int(v) for v in k): (float(p), float(m))
                for k, p, m in zip(self.term_keys, self.a_plus, self.a_minus)}

    def to_json(self, max_terms: int | None = 1000) -> dict:
        order = np.argsort(-np.abs(self.a_plus - self.a_minus), kind="stable")
        if max_terms is not None:
            order = order[:max_terms]
        return {
            "l1_estimate": self.l1_estimate,
            "l1_stderr": self.l1_stderr,
            "total_mass": self.total_mass,
            "boundary_residual": self.boundary_residual,
            "residual_stderr": self.residual_stderr,
            "relative_residual": self.relative_residual,
            "edge_classes": self.edge_classes,
            "classes": self.classes,
            "implied_bound": self.implied_bound,
            "implied_bound_stderr": self.implied_bound_stderr,
            "coherence_violations": self.coherence_violations,
            "max_vertex_diameter": self.max_vertex_diameter,
            "samples": self.samples,
            "seed": self.seed,
            "surface_area": self.surface_area,
            "sampled_terms": {
                "count": self.classes,
                "listed": len(order),
                "keys": self.term_keys[order].tolist(),
                "a_plus": self.a_plus[order].tolist(),
                "a_minus": self.a_minus[order].tolist(),
            },
            "config": self.config,
        }


def upper_bound_from_smearing(e: SmearEstimate, q: ModelQuadrilateral) -> float:
    """Bound on the cubical simplicial volume of the surface implied by smearing ``q``."""
    if e.samples <= 0 or not math.isfinite(e.l1_estimate):
        raise ValueError("invalid smearing estimate")
    return smearing_bound(e.surface_area, q.area)


def stream_seeds(seed: int, streams: int = BATCHES) -> list[np.random.SeedSequence]:
    """Independent per-batch streams; batch ``i`` always uses stream ``i``."""
    return np.random.SeedSequence(seed).spawn(streams)


def sample_isometries(s: SurfaceGroup, rng: np.random.Generator, count: int):
    """Haar samples of Isom(H^2) over a fundamental domain: matrices and orientation signs."""
    x = s.sample_points(rng, count)
    r = np.arccosh(np.maximum(x[:, -1], 1.0))
    phi = np.arctan2(x[:, 1], x[:, 0])
    psi = rng.random(count) * 2 * math.pi
    flip = rng.random(count) < 0.5
    g = rotation(phi) @ boost(r) @ rotation(psi)
    g[flip] = g[flip] @ REFLECTION
    return g, np.where(flip, -1, 1)


def _round_spatial(v: np.ndarray) -> np.ndarray:
    # distinct orbit points are at least 2 sinh(inradius) > 4 apart in the plane
    return np.rint(v[..., :2]).astype(np.int64)


@dataclass
class _Chunk:
    keys: np.ndarray
    signs: np.ndarray
    edge_keys: np.ndarray
    edge_signs: np.ndarray
    areas: np.ndarray
    diam: float


def _process(s: SurfaceGroup, net: GammaNet, model: np.ndarray, g: np.ndarray, sign: np.ndarray) -> _Chunk:
    m = len(g)
    # locate the first vertex, then the others from its frame, so that the
    # relative group elements delta_k = gamma_0^-1 gamma_k are formed from small matrices
    i0, gam0, _ = net.locate(g @ model[0])
    h = inverse(gam0) @ g
    rest, delta, _ = net.locate(np.einsum("nij,vj->nvi", h, model[1:]).reshape(-1, 3))
    idx = np.concatenate([i0[:, None], rest.reshape(m, 3)], axis=1)
    delta = np.concatenate([np.broadcast_to(np.eye(3), (m, 1, 3, 3)), delta.reshape(m, 3, 3, 3)], axis=1)
    X = np.einsum("nvij,nvj->nvi", delta, net.base_points[idx])
    areas = signed_area_quad(X[:, 0], X[:, 1], X[:, 2], X[:, 3])
    diam = float(max(distance(X[:, a], X[:, b]).max() for a in range(4) for b in range(a + 1, 4)))
    rel = _round_spatial(delta[:, 1:, :, 2])
    keys = np.concatenate([idx, rel.reshape(m, 6)], axis=1)
    ek, es = [], []
    for (u, v), bsign in EDGES:
        d = _round_spatial(np.einsum("nij,nj->ni", inverse(delta[:, u]), delta[:, v, :, 2]))
        ek.append(np.concatenate([idx[:, [u, v]], d], axis=1))
        es.append(bsign * sign)
    return _Chunk(keys, sign, np.concatenate(ek), np.concatenate(es), areas, diam)


def _group(keys: np.ndarray, values: np.ndarray):
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    return uniq, np.bincount(inv.ravel(), weights=values, minlength=len(uniq))


def _batch_stats(chunk: _Chunk, weight: float, surface_area: float):
    _, net = _group(chunk.keys, weight * chunk.signs)
    l1 = float(np.abs(net).sum())
    _, b = _group(chunk.edge_keys, weight * chunk.edge_signs)
    res = float(np.abs(b).sum())
    alpha = float(np.sum(weight * chunk.signs * chunk.areas))
    return l1, res, surface_area * l1 / alpha


def _merge(chunks: list[_Chunk]) -> _Chunk:
    return _Chunk(
        np.concatenate([c.keys for c in chunks]),
        np.concatenate([c.signs for c in chunks]),
        np.concatenate([c.edge_keys for c in chunks]),
        np.concatenate([c.edge_signs for c in chunks]),
        np.concatenate([c.areas for c in chunks]),
        max(c.diam for c in chunks),
    )


def estimate_smearing(
    s: SurfaceGroup,
    net: GammaNet,
    q: ModelQuadrilateral,
    samples: int,
    seed: int,
    *,
    precompose: np.ndarray | None = None,
    chunk_size: int = 50_000,
    keep_samples: bool = False,
    min_samples: int = 10_000,
) -> SmearEstimate:
    """Monte-Carlo smearing coefficients of ``q`` over the surface.

    Each sample has weight ``2 * area / samples``.  ``l1_estimate`` is the
    l1 norm ``sum |a+ - a-|`` of the smeared chain and ``boundary_residual``
    the l1 norm of its estimated boundary; error bars come from batch means
    over 16 independent streams.  ``precompose`` multiplies every sampled
    isometry on the left by a fixed group element.
    """
    if samples < min_samples:
        raise ValueError(f"need at least {min_samples} samples, got {samples}")
    model = q.vertices
    counts = [samples // BATCHES + (i < samples % BATCHES) for i in range(BATCHES)]
    batches = []
    for ss, n in zip(stream_seeds(seed), counts):
        rng = np.random.default_rng(ss)
        parts = []
        done = 0
        while done < n:
            m = min(chunk_size, n - done)
            g, sign = sample_isometries(s, rng, m)
            if precompose is not None:
                g = precompose @ g
            parts.append(_process(s, net, model, g, sign))
            done += m
        batches.append(_merge(parts))
    weight = 2 * s.area / samples
    stats = np.array([_batch_stats(b, 2 * s.area / n, s.area) for b, n in zip(batches, counts)])
    everything = _merge(batches)
    keys, plus = _group(everything.keys, weight * (everything.signs > 0))
    _, minus = _group(everything.keys, weight * (everything.signs < 0))
    l1 = float(np.abs(plus - minus).sum())
    _, b = _group(everything.edge_keys, weight * everything.edge_signs)
    edge_classes = len(b)
    residual = float(np.abs(b).sum())
    alpha = float(np.sum(weight * everything.signs * everything.areas))
    coherence = int(np.sum(np.sign(everything.areas) != everything.signs))
    se = stats.std(axis=0, ddof=1) / math.sqrt(BATCHES)
    return SmearEstimate(
        term_keys=keys,
        a_plus=plus,
        a_minus=minus,
        l1_estimate=l1,
        l1_stderr=float(se[0]),
        total_mass=float(plus.sum() + minus.sum()),
        boundary_residual=residual,
        residual_stderr=float(se[1]),
        edge_classes=edge_classes,
        implied_bound=s.area * l1 / alpha,
        implied_bound_stderr=float(se[2]),
        coherence_violations=coherence,
        max_vertex_diameter=everything.diam,
        samples=samples,
        seed=seed,
        surface_area=s.area,
        config={"genus": s.genus, "mesh": net.mesh, "truncation": q.L, "cells": net.cell_count,
                "batches": BATCHES},
        sample_areas=everything.areas if keep_samples else None,
    )


__all__ = [
    "BATCHES",
    "ModelQuadrilateral",
    "SmearEstimate",
    "V2_CUBE",
    "estimate_smearing",
    "sample_isometries",
    "smearing_bound",
    "stream_seeds",
    "upper_bound_from_smearing",
]
