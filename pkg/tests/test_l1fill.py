from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from cubevol.chains import Cube, FormalChain, Simplex, as_point, bits, boundary
from cubevol.cube2simplex import phi
from cubevol.l1fill import (
    L1Problem,
    cube_filling_problem,
    enumerate_generators,
    min_l1_fill,
    orient,
)


def _float_min(problem):
    faces, B, b = problem.boundary_matrix()
    B = np.array(B, dtype=float)
    n = B.shape[1]
    res = linprog(np.ones(2 * n), A_eq=np.hstack([B, -B]), b_eq=np.array(b, float),
                  bounds=(0, None), method="highs")
    return res.fun


def test_generators_skip_flat_simplices():
    verts = [as_point(b) for b in bits(2)]
    assert len(enumerate_generators(verts, 2)) == 4
    assert len(enumerate_generators(verts + [as_point((Fraction(1, 2),) * 2)], 2)) == 8


def test_orient_sorts_and_signs():
    order = [as_point(p) for p in [(0,), (1,), (2,)]]
    z = FormalChain.of(Simplex.of((1,), (0,)))
    assert orient(z, order) == FormalChain.of(Simplex.of((0,), (1,)), -1)
    assert orient(FormalChain.of(Simplex.of((0,), (0,))), order) == 0


def test_dimension_two_fill_is_two():
    sol = min_l1_fill(cube_filling_problem(2))
    assert sol.objective == 2
    assert sol.verify()
    assert abs(_float_min(sol.problem) - 2) < 1e-9


def test_dimension_two_with_centre():
    sol = min_l1_fill(cube_filling_problem(2, with_center=True))
    assert sol.objective == 2 and sol.verify()


def test_dimension_three_fill_is_five():
    p = cube_filling_problem(3)
    assert len(p.generators) == 58
    sol = min_l1_fill(p)
    assert sol.objective == 5
    assert sol.verify()
    assert abs(_float_min(p) - 5) < 1e-7


@pytest.mark.slow
def test_dimension_three_with_centre_is_still_five():
    sol = min_l1_fill(cube_filling_problem(3, with_center=True))
    assert sol.objective == 5 and sol.verify()


def test_filling_bounds_the_symmetrized_map():
    # phi_3 of the standard cube is itself a filling, of norm 5 once oriented
    verts = [as_point(b) for b in bits(3)]
    z = orient(phi(3, FormalChain.of(Cube.identity(3))), verts)
    p = cube_filling_problem(3)
    assert boundary(z) == p.target
    assert sum(abs(c) for c in z.values()) == 5


def test_certificate_rejects_tampering():
    sol = min_l1_fill(cube_filling_problem(2))
    sol.coefficients[0] += 1
    assert not sol.verify()


def test_infeasible_target_has_farkas_certificate():
    verts = [as_point(p) for p in [(0, 0), (1, 0), (0, 1)]]
    # a lone edge is not a boundary
    target = FormalChain.of(Simplex.of((0, 0), (1, 0)))
    sol = min_l1_fill(L1Problem(enumerate_generators(verts, 2), target))
    assert not sol.feasible
    assert sol.verify()


def test_zero_target():
    verts = [as_point(b) for b in bits(2)]
    sol = min_l1_fill(L1Problem(enumerate_generators(verts, 2), FormalChain.zero(1)))
    assert sol.objective == 0 and sol.verify()
