"""Battery of self-checks shared by the command line and the acceptance tests."""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .chains import Cube, FormalChain, as_point, bits, l1_norm
from .cube2simplex import base_model, chain_map_defect, extend_phi, phi
from .hypgeom import V3_TETRA, StraightCube, coxeter_check, diameter, hull_containment, point_at
from .l1fill import cube_filling_problem, min_l1_fill


@dataclass
class Check:
    name: str
    passed: bool
    value: object
    expected: str
    certifies: str
    seconds: float = 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        if isinstance(d["value"], Fraction):
            d["value"] = str(d["value"])
        return d


def random_affine_cube(rng: random.Random, k: int, n: int = 3, span: int = 20, denom: int = 7) -> Cube:
    """Affine k-cube in Q^n with independent random rational vertices."""
    return Cube(tuple(
        as_point(Fraction(rng.randint(-span, span), rng.randint(1, denom)) for _ in range(n))
        for _ in range(2 ** k)
    ))


def degenerate_cube(rng: random.Random, k: int, direction: int, n: int = 3) -> Cube:
    """Random affine k-cube independent of coordinate ``direction`` (1-based)."""
    c = random_affine_cube(rng, k, n)
    verts = []
    for b in bits(k):
        b0 = list(b)
        b0[direction - 1] = 0
        verts.append(c.vertex(b0))
    return Cube(tuple(verts))


def random_straight_cube(rng: np.random.Generator, k: int = 3, n: int = 3, radius: float = 2.0) -> StraightCube:
    dirs = rng.normal(size=(2 ** k, n))
    return StraightCube(point_at(dirs, rng.uniform(0, radius, size=2 ** k)))


def _timed(fn: Callable[[], tuple[bool, object]]):
    t = time.perf_counter()
    ok, value = fn()
    return ok, value, time.perf_counter() - t


def check_chain_maps(cubes: int = 200, seed: int = 0) -> list[Check]:
    out = []
    for j in (1, 2, 3):
        def run(j=j):
            rng = random.Random(seed + j)
            tests = [Cube.identity(j)] + [random_affine_cube(rng, j) for _ in range(cubes)]
            bad = sum(1 for c in tests if chain_map_defect(j, c) != 0)
            return bad == 0, bad
        ok, bad, dt = _timed(run)
        out.append(Check(f"chain_map_deg{j}", ok, bad, "0 failing cubes",
                         f"boundary of phi_{j} equals phi_{j - 1} of the boundary, exactly", dt))
    return out


def check_degenerate(seed: int = 0, trials: int = 5) -> list[Check]:
    out = []
    for j in (1, 2, 3):
        def run(j=j):
            rng = random.Random(100 + seed + j)
            bad = 0
            for d in range(1, j + 1):
                for _ in range(trials):
                    if phi(j, FormalChain.of(degenerate_cube(rng, j, d))) != 0:
                        bad += 1
            return bad == 0, bad
        ok, bad, dt = _timed(run)
        out.append(Check(f"degenerate_vanishing_deg{j}", ok, bad, "0 non-vanishing images",
                         f"phi_{j} kills cubes degenerate in any direction", dt))
    return out


def check_norms() -> list[Check]:
    out = []
    ok, v, dt = _timed(lambda: (l1_norm(base_model(3)) <= 5, l1_norm(base_model(3))))
    out.append(Check("phi3_norm <= 5", ok, v, "<= 5", "l1 norm of phi_3 on the standard 3-cube", dt))

    def ext():
        v = l1_norm(extend_phi(4, FormalChain.of(Cube.identity(4))))
        return v <= 2 ** 4 * 24, v
    ok, v, dt = _timed(ext)
    out.append(Check("extend4_norm <= 384", ok, v, "<= 2^4 * 4! = 384",
                     "iterated coning bound in degree 4", dt))
    ok, v, dt = _timed(lambda: (chain_map_defect(4, Cube.identity(4)) == 0, "exact"))
    out.append(Check("chain_map_deg4", ok, v, "exact", "compatibility of the coned map in degree 4", dt))
    return out


def check_fillings() -> list[Check]:
    out = []
    for n, expected in ((2, 2), (3, 5)):
        def run(n=n, expected=expected):
            sol = min_l1_fill(cube_filling_problem(n))
            return sol.verify() and sol.objective == expected, sol.objective
        ok, v, dt = _timed(run)
        out.append(Check(f"min_fill_dim{n} == {expected}", ok, v, str(expected),
                         f"certified minimal l1 filling of the image of the {n}-cube boundary", dt))
    return out


def check_coxeter() -> list[Check]:
    def run():
        r = coxeter_check()
        ok = r.max_deviation <= 1e-9 and abs(r.total - 5 * V3_TETRA) <= 5e-9
        return ok, r.total
    ok, v, dt = _timed(run)
    return [Check("coxeter", ok, v, f"5 * {V3_TETRA:.12f}",
                  "regular ideal 3-cube splits into five regular ideal tetrahedra", dt)]


def check_geometry(cubes: int = 20, grid: int = 17, seed: int = 0) -> list[Check]:
    def run():
        rng = np.random.default_rng(seed)
        bad = 0
        for _ in range(cubes):
            c = random_straight_cube(rng)
            if not (diameter(c, grid=grid).ok and hull_containment(c, grid)):
                bad += 1
        return bad == 0, bad
    ok, v, dt = _timed(run)
    return [Check("diameter_and_hull", ok, v, "0 failing cubes",
                  "straight cube diameter equals vertex diameter; image inside the vertex hull", dt)]


def run_all(cubes: int = 200, geometry_cubes: int = 20) -> list[Check]:
    return (check_chain_maps(cubes) + check_degenerate() + check_norms() + check_fillings()
            + check_coxeter() + check_geometry(geometry_cubes))


__all__ = [
    "Check",
    "check_chain_maps",
    "check_coxeter",
    "check_degenerate",
    "check_fillings",
    "check_geometry",
    "check_norms",
    "degenerate_cube",
    "random_affine_cube",
    "random_straight_cube",
    "run_all",
]
