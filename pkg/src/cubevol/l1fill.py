"""Certified minimal l1 fillings over finite sets of affine simplices.

Fillings are computed in the oriented simplicial complex: a simplex and any
reordering of its vertices are one generator up to the sign of the
reordering, and each generator appears once, in the vertex order of the
input vertex list.  Ordered chains (e.g. outputs of
:mod:`cubevol.cube2simplex`) are projected with :func:`orient` first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lp
from .chains import Cube, FormalChain, Simplex, as_point, bits, boundary
from .cube2simplex import extend_phi

__all__ = [
    "L1Problem",
    "L1Solution",
    "cube_filling_problem",
    "enumerate_generators",
    "min_l1_fill",
    "orient",
]


def _affine_rank(points) -> int:
    """Rank of the difference vectors, by exact Gaussian elimination."""
    if len(points) < 2:
        return 0
    rows = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
    rank, col, ncols = 0, 0, len(rows[0])
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] / rows[rank][col]
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def enumerate_generators(vertex_set: Sequence, n: int) -> list[Simplex]:
    """All affinely independent n-simplices on ``vertex_set``, in list order."""
    pts = [as_point(v) for v in vertex_set]
    if len(pts) < n + 1:
        raise ValueError(f"need at least {n + 1} vertices for {n}-simplices")
    return [
        Simplex(combo)
        for combo in itertools.combinations(pts, n + 1)
        if _affine_rank(combo) == n
    ]


def _parity(seq) -> int:
    return sum(1 for a, b in itertools.combinations(seq, 2) if a > b) % 2


def orient(z: FormalChain, order: Sequence | None = None) -> FormalChain:
    """Project an ordered simplicial chain to oriented simplices.

    Vertices are sorted by their position in ``order`` (default: the
    lexicographic order of points); simplices with a repeated vertex vanish.
    """
    rank = None if order is None else {as_point(v): i for i, v in enumerate(order)}
    terms = []
    for s, c in z.items():
        keys = [v if rank is None else rank[v] for v in s.vertices]
        if len(set(keys)) < len(keys):
            continue
        perm = sorted(range(len(keys)), key=keys.__getitem__)
        sign = -1 if _parity(perm) else 1
        terms.append((Simplex(tuple(s.vertices[i] for i in perm)), sign * c))
    return FormalChain(terms, dim=z.dim)


@dataclass
class L1Problem:
    """Minimize the l1 norm of ``sum a_i g_i`` subject to its boundary being ``target``."""

    generators: list[Simplex]
    target: FormalChain

    def __post_init__(self):
        n = self.target.dim + 1
        if any(g.dim != n for g in self.generators):
            raise ValueError(f"generators must be {n}-simplices")

    def faces(self) -> list[Simplex]:
        seen = dict.fromkeys(f for g in self.generators for f, _ in g.boundary_terms())
        for f in self.target:
            seen.setdefault(f)
        return list(seen)

    def boundary_matrix(self):
        faces = self.faces()
        index = {f: r for r, f in enumerate(faces)}
        B = [[Fraction(0)] * len(self.generators) for _ in faces]
        for col, g in enumerate(self.generators):
            for f, s in g.boundary_terms():
                B[index[f]][col] += s
        b = [self.target.get(f, Fraction(0)) for f in faces]
        return faces, B, b


@dataclass
class L1Solution:
    coefficients: list[Fraction]
    objective: Fraction
    certificate: dict = field(default_factory=dict)
    problem: L1Problem | None = None
    feasible: bool = True

    def chain(self) -> FormalChain:
        return FormalChain(zip(self.problem.generators, self.coefficients), dim=self.problem.target.dim + 1)

    def verify(self) -> bool:
        """Exact re-check of feasibility and of the dual optimality certificate."""
        p = self.problem
        if not self.feasible:
            # Farkas: y annihilates every generator boundary but not the target
            y = self.certificate
            cols_ok = all(sum(y.get(f, 0) * s for f, s in g.boundary_terms()) == 0 for g in p.generators)
            return cols_ok and sum(y.get(f, 0) * c for f, c in p.target.items()) != 0
        z = self.chain()
        if z.dim == 0 or boundary(z) != p.target:
            return False
        if sum(abs(a) for a in self.coefficients) != self.objective:
            return False
        y = self.certificate
        for g in p.generators:
            if abs(sum(y.get(f, 0) * s for f, s in g.boundary_terms())) > 1:
                return False
        return sum(y.get(f, 0) * c for f, c in p.target.items()) == self.objective


def min_l1_fill(problem: L1Problem) -> L1Solution:
    """Exact minimum-l1 filling with a dual certificate.

    Each coefficient is split as ``a = a+ - a-`` with both parts
    non-negative; the dual ``y`` of the resulting LP satisfies
    ``|<y, d g>| <= 1`` for every generator and ``<y, target> = objective``.
    """
    faces, B, b = problem.boundary_matrix()
    ngen = len(problem.generators)
    if not any(b):
        return L1Solution([Fraction(0)] * ngen, Fraction(0), {}, problem)
    A = [row + [-a for a in row] for row in B]
    try:
        res = lp.solve([1] * (2 * ngen), A, b)
    except lp.InfeasibleLP as exc:
        cert = {f: y for f, y in zip(faces, exc.farkas) if y}
        return L1Solution([], Fraction(0), cert, problem, feasible=False)
    coeffs = [res.x[i] - res.x[ngen + i] for i in range(ngen)]
    cert = {f: y for f, y in zip(faces, res.dual) if y}
    return L1Solution(coeffs, res.objective, cert, problem)


def cube_filling_problem(n: int, with_center: bool = False) -> L1Problem:
    """Fill phi_{n-1}(boundary of the standard n-cube) by simplices on its corners."""
    ident = Cube.identity(n)
    verts = [as_point(v) for v in bits(n)]
    if with_center:
        verts.append(as_point([Fraction(1, 2)] * n))
    target = orient(extend_phi(n - 1, boundary(FormalChain.of(ident))), verts)
    return L1Problem(enumerate_generators(verts, n), target)
