"""Exact rational simplex method (two phases, Bland's rule).

Solves ``min c.x  s.t.  A x = b, x >= 0`` over :class:`fractions.Fraction`
on a dense tableau.  Intended for the small certification problems in
:mod:`cubevol.l1fill`, not for performance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


class InfeasibleLP(Exception):
    def __init__(self, farkas: list[Fraction]):
        super().__init__("linear program is infeasible")
        self.farkas = farkas


class UnboundedLP(Exception):
    pass


@dataclass
class LPResult:
    x: list[Fraction]
    objective: Fraction
    dual: list[Fraction]
    pivots: int = 0
    basis: list[int] = field(default_factory=list)


class _Tableau:
    def __init__(self, A, b):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        self.rows = []
        self.flip = []
        for i in range(self.m):
            row = [Fraction(a) for a in A[i]]
            rhs = Fraction(b[i])
            neg = rhs < 0
            if neg:
                row = [-a for a in row]
                rhs = -rhs
            art = [Fraction(int(k == i)) for k in range(self.m)]
            self.rows.append(row + art + [rhs])
            self.flip.append(neg)
        self.basis = [self.n + i for i in range(self.m)]
        self.pivots = 0

    @property
    def width(self):
        return self.n + self.m

    def pivot(self, r, col):
        prow = self.rows[r]
        p = prow[col]
        if p != 1:
            prow[:] = [a / p for a in prow]
        for i, row in enumerate(self.rows):
            if i != r and row[col]:
                f = row[col]
                row[:] = [a - f * b if b else a for a, b in zip(row, prow)]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost):
        cb = [cost[j] for j in self.basis]
        out = []
        for j in range(self.width):
            out.append(cost[j] - sum((cb[i] * self.rows[i][j] for i in range(self.m) if cb[i] and self.rows[i][j]), ZERO))
        return out

    def run(self, cost, allowed):
        """Bland's rule: smallest eligible entering and leaving index."""
        while True:
            rc = self.reduced_costs(cost)
            entering = next((j for j in range(self.width) if allowed[j] and rc[j] < 0), None)
            if entering is None:
                return rc
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise UnboundedLP(f"objective unbounded along column {entering}")
            self.pivot(best[1], entering)


def solve(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0`` exactly.

    The returned ``dual`` satisfies ``A^T y <= c`` with ``b.y`` equal to the
    optimum.  Raises :class:`InfeasibleLP` carrying a Farkas vector ``y``
    with ``A^T y <= 0`` and ``b.y > 0``.
    """
    t = _Tableau(A, b)
    n, m = t.n, t.m
    phase1 = [ZERO] * n + [Fraction(1)] * m
    allowed = [True] * (n + m)
    rc = t.run(phase1, allowed)
    infeas = sum((t.rows[i][-1] for i in range(m) if t.basis[i] >= n), ZERO)
    if infeas > 0:
        # phase-1 duals: artificial i has cost 1, reduced cost 1 - y_i
        y = [1 - rc[n + i] for i in range(m)]
        raise InfeasibleLP([-v if t.flip[i] else v for i, v in enumerate(y)])
    # drive zero-level artificials out of the basis where possible
    for r in range(m):
        if t.basis[r] >= n:
            col = next((j for j in range(n) if t.rows[r][j] != 0), None)
            if col is not None:
                t.pivot(r, col)
    cost = [Fraction(x) for x in c] + [ZERO] * m
    allowed = [True] * n + [False] * m
    rc = t.run(cost, allowed)
    x = [ZERO] * n
    for i, j in enumerate(t.basis):
        if j < n:
            x[j] = t.rows[i][-1]
    obj = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), ZERO)
    # artificial columns have zero cost: their reduced cost is -y_i
    y = [-rc[n + i] for i in range(m)]
    y = [-v if t.flip[i] else v for i, v in enumerate(y)]
    return LPResult(x=x, objective=obj, dual=y, pivots=t.pivots, basis=list(t.basis))
