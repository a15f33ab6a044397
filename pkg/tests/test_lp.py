from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from cubevol import lp


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def test_small_lp_optimum_and_dual():
    # min x + 2y  s.t.  x + y = 3, x - y = 1
    res = lp.solve([1, 2], [[1, 1], [1, -1]], [3, 1])
    assert res.x == [2, 1]
    assert res.objective == 4
    assert _dot(res.dual, [3, 1]) == res.objective


def test_negative_rhs_rows():
    res = lp.solve([1, 1], [[-1, 0], [0, 1]], [-2, 3])
    assert res.x == [2, 3]
    assert _dot(res.dual, [-2, 3]) == 5


def test_infeasible_has_farkas_vector():
    A = [[1, 1], [1, 1]]
    b = [1, 2]
    with pytest.raises(lp.InfeasibleLP) as exc:
        lp.solve([0, 0], A, b)
    y = exc.value.farkas
    assert all(_dot([A[i][j] for i in range(2)], y) <= 0 for j in range(2))
    assert _dot(b, y) > 0


def test_unbounded():
    with pytest.raises(lp.UnboundedLP):
        lp.solve([-1, 0], [[1, -1]], [0])


def test_redundant_rows():
    res = lp.solve([1, 1], [[1, 1], [2, 2]], [1, 2])
    assert res.objective == 1


@st.composite
def feasible_lps(draw):
    m = draw(st.integers(1, 4))
    n = draw(st.integers(m, 7))
    A = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)]
    x0 = [draw(st.integers(0, 3)) for _ in range(n)]
    b = [_dot(row, x0) for row in A]
    c = [draw(st.integers(0, 5)) for _ in range(n)]
    return c, A, b


@settings(max_examples=80, deadline=None)
@given(feasible_lps())
def test_matches_scipy_and_certifies(problem):
    c, A, b = problem
    res = lp.solve(c, A, b)
    ref = linprog(c, A_eq=np.array(A, float), b_eq=np.array(b, float), bounds=(0, None), method="highs")
    assert ref.status == 0
    assert abs(float(res.objective) - ref.fun) < 1e-7
    # exact primal feasibility, dual feasibility and zero gap
    assert all(_dot(row, res.x) == bi for row, bi in zip(A, b))
    assert all(x >= 0 for x in res.x)
    for j in range(len(c)):
        assert _dot([A[i][j] for i in range(len(A))], res.dual) <= c[j]
    assert _dot(b, res.dual) == res.objective
    assert isinstance(res.objective, Fraction)
