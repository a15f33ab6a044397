import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.spatial import Delaunay

from cubevol.chains import FacePattern, FormalChain, boundary, l1_norm
from cubevol.hypgeom import (
    V3_TETRA,
    HPoint,
    SingularCube,
    StraightCube,
    clausen,
    coxeter_check,
    diameter,
    distance,
    from_ball,
    from_klein,
    geodesic,
    geodesic_test,
    hull_containment,
    ideal_tetra_volume,
    lobachevsky,
    minkowski,
    origin,
    point_at,
    points_in_hull,
    regular_ideal_cube,
    regular_ideal_cube_directions,
    signed_area_quad,
    signed_area_triangle,
    signed_volume,
    straight_cube_eval,
    straighten,
    to_ball,
    to_klein,
    truncate_ideal_cube,
    volume_density,
)
from cubevol.hypgeom.checks import _in_hull_lp
from cubevol.verify import random_straight_cube

# frozen from mpmath at 30 digits (clsin(2, 2t) / 2)
V3_ORACLE = 1.01494160640965362502
LOB_PI_6 = 0.507470803204826812511
LOB_PI_3 = 0.338313868803217875007
CATALAN = 0.915965594177219015055


def random_points(rng, count, n=3, radius=3.0):
    return point_at(rng.normal(size=(count, n)), rng.uniform(0, radius, size=count))


def lorentz(rng, n=3):
    """Random orientation-preserving isometry: rotation, boost, rotation."""
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    rot = np.eye(n + 1)
    rot[:n, :n] = q
    r = rng.uniform(0, 1.5)
    b = np.eye(n + 1)
    b[0, 0] = b[n, n] = math.cosh(r)
    b[0, n] = b[n, 0] = math.sinh(r)
    return rot @ b @ rot.T @ rot


# -- models -------------------------------------------------------------------


def test_model_conversions_round_trip():
    rng = np.random.default_rng(0)
    x = random_points(rng, 1000)
    assert np.abs(from_klein(to_klein(x)) - x).max() < 1e-12 * np.abs(x).max()
    assert np.abs(from_ball(to_ball(x)) - x).max() < 1e-12 * np.abs(x).max()
    k = to_klein(x)
    b = to_ball(x)
    assert np.allclose(to_klein(from_ball(b)), k, atol=1e-12)


def test_hpoint_validation_and_json():
    p = HPoint.from_array(point_at([1.0, 2.0, 0.5], 1.2))
    d = p.to_json()
    assert d["coords"][0] == p.coords[-1]
    assert HPoint.from_json(d) == p
    with pytest.raises(ValueError):
        HPoint((0.0, 0.0, 0.5))
    ideal = HPoint.from_array([0.0, 0.6, 0.8, 1.0], ideal=True)
    assert HPoint.from_json(ideal.to_json()) == ideal


def test_geodesic_endpoints_and_constant_speed():
    rng = np.random.default_rng(1)
    x, y = random_points(rng, 2)
    assert np.array_equal(geodesic(x, y, 0.0), x)
    assert np.array_equal(geodesic(x, y, 1.0), y)
    assert np.allclose(geodesic(x, x, 0.37), x, atol=1e-15)
    d = distance(x, y)
    ts = np.linspace(0, 1, 100)
    g = geodesic(x[None], y[None], ts)
    assert np.abs(distance(x, g) - ts * d).max() < 1e-10
    assert np.abs(minkowski(g, g) + 1).max() < 1e-12 * np.abs(g).max() ** 2
    mid = geodesic(x, y, 0.5)
    assert abs(distance(x, mid) - distance(mid, y)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-6, 0.2), st.floats(0, 1))
def test_geodesic_short_segments(d, t):
    x = origin(2)
    y = point_at([1.0, 0.0], d)
    g = geodesic(x, y, t)
    assert abs(distance(x, g) - t * d) < 1e-12
    assert abs(minkowski(g, g) + 1) < 1e-14


# -- straight cubes -------------------------------------------------------------


def test_straight_cube_evaluation_examples():
    rng = np.random.default_rng(2)
    p = random_points(rng, 1)
    assert np.array_equal(StraightCube(p).evaluate(np.zeros(0)), p[0])
    v = random_points(rng, 4, n=2)
    c = StraightCube(v)
    for idx, b in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        assert np.array_equal(straight_cube_eval(c, np.array(b, float)), v[idx])
    m0 = geodesic(v[0], v[2], 0.5)
    m1 = geodesic(v[1], v[3], 0.5)
    assert np.allclose(c.evaluate([0.5, 0.5]), geodesic(m0, m1, 0.5), atol=1e-13)


def test_ideal_cube_cannot_be_evaluated():
    with pytest.raises(ValueError):
        regular_ideal_cube().evaluate([0.5, 0.5, 0.5])


def test_face_of_straight_cube_is_restriction():
    rng = np.random.default_rng(3)
    c = random_straight_cube(rng)
    t = rng.random((20, 2))
    for j in (1, 2, 3):
        for i in (0, 1):
            full = np.insert(t, j - 1, float(i), axis=1)
            assert np.allclose(c.face(FacePattern(j, i)).evaluate(t), c.evaluate(full), atol=1e-12)


def test_jet_matches_finite_differences():
    rng = np.random.default_rng(4)
    c = random_straight_cube(rng)
    t = rng.uniform(0.1, 0.9, size=(10, 3))
    _, J = c.evaluate_jet(t)
    h = 1e-6
    for a in range(3):
        e = np.zeros(3)
        e[a] = h
        fd = (c.evaluate(t + e) - c.evaluate(t - e)) / (2 * h)
        assert np.abs(fd - J[..., a]).max() < 1e-7


def test_density_positive_at_origin_frame():
    eps = 1e-3
    corners = np.array([[eps * b1, eps * b2] for b1 in (0, 1) for b2 in (0, 1)])
    c = StraightCube(from_klein(corners))
    d = volume_density(c, np.array([[0.0, 0.0]]))[0]
    assert d > 0 and abs(d / eps ** 2 - 1) < 1e-2


# -- volumes ------------------------------------------------------------------


def test_degenerate_cube_has_zero_volume():
    rng = np.random.default_rng(5)
    v = random_points(rng, 4)
    c = StraightCube(np.concatenate([v, v]))
    assert c.is_degenerate()
    assert abs(signed_volume(c, depth=1).value) < 1e-9


def test_orientation_reversal_negates_volume():
    rng = np.random.default_rng(6)
    c = random_straight_cube(rng)
    swapped = StraightCube(np.concatenate([c.vertices[4:], c.vertices[:4]]))
    a = signed_volume(c, depth=1).value
    b = signed_volume(swapped, depth=1).value
    assert abs(a + b) < 1e-9


def test_isometry_invariance():
    rng = np.random.default_rng(7)
    flip = np.diag([-1.0, 1.0, 1.0, 1.0])
    for _ in range(50):
        c = random_straight_cube(rng)
        g = lorentz(rng)
        v = signed_volume(c, depth=0).value
        moved = StraightCube(c.vertices @ g.T)
        assert abs(signed_volume(moved, depth=0).value - v) < 1e-9
        mirrored = StraightCube(c.vertices @ flip.T)
        assert abs(signed_volume(mirrored, depth=0).value + v) < 1e-9


def test_quadrature_convergence_flag():
    rng = np.random.default_rng(8)
    c = random_straight_cube(rng)
    r = signed_volume(c, tol=1e-8)
    assert r.converged and r.error_estimate <= 1e-8 and r.error_estimate >= 0
    r = signed_volume(truncate_ideal_cube(regular_ideal_cube_directions(), 8), tol=1e-12, max_depth=1)
    assert not r.converged


def test_signed_volume_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        signed_volume(StraightCube(random_points(np.random.default_rng(0), 4)))


def test_truncated_regular_cube_converges():
    vols = [signed_volume(truncate_ideal_cube(regular_ideal_cube_directions(), L), depth=3).value
            for L in (2, 4, 6, 8)]
    assert all(a <= b for a, b in zip(vols, vols[1:]))
    assert abs(vols[-1] - 5 * V3_ORACLE) < 1e-2
    v10 = signed_volume(truncate_ideal_cube(regular_ideal_cube_directions(), 10), depth=3).value
    assert abs(vols[-1] - v10) < 1e-3


def test_truncation_edge_cases():
    dirs = regular_ideal_cube_directions()
    c0 = truncate_ideal_cube(dirs, 0.0)
    assert np.allclose(c0.vertices, origin(3))
    assert signed_volume(c0, depth=0).value == 0
    with pytest.raises(ValueError):
        truncate_ideal_cube(np.concatenate([dirs[:4], dirs[:4]]), 3.0)
    # null vectors are accepted as directions
    a = truncate_ideal_cube(regular_ideal_cube().vertices, 3.0)
    assert a == truncate_ideal_cube(dirs, 3.0)


def test_volume_is_locally_lipschitz():
    rng = np.random.default_rng(9)
    for L in (2.0, 4.0):
        c = truncate_ideal_cube(regular_ideal_cube_directions(), L)
        v = signed_volume(c, depth=2).value
        k = to_klein(c.vertices) + rng.uniform(-1e-4, 1e-4, size=(8, 3)) / 2
        moved = StraightCube(from_klein(k))
        dv = abs(signed_volume(moved, depth=2).value - v)
        assert dv <= 1e-2


@pytest.mark.slow
def test_volume_bounded_by_hull_simplices():
    rng = np.random.default_rng(10)
    simplex_counts = []
    for _ in range(100):
        c = random_straight_cube(rng)
        vol = abs(signed_volume(c, depth=1).value)
        k = to_klein(c.vertices)
        tri = Delaunay(k)
        simplex_counts.append(len(tri.simplices))
        total = 0.0
        for s in tri.simplices:
            p = c.vertices[s]
            # the collapsed cube parametrises the geodesic simplex
            tet = StraightCube(p[[0, 0, 0, 0, 1, 1, 2, 3]])
            v = abs(signed_volume(tet, depth=1).value)
            assert v <= V3_TETRA + 1e-9
            total += v
        assert vol <= total + 1e-6
    assert max(simplex_counts) < 30


def test_collapsed_cube_volume_of_ideal_like_tetrahedron():
    # a large regular tetrahedron approaches the ideal regular one from below
    dirs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float) / math.sqrt(3)
    p = point_at(dirs, np.full(4, 9.0))
    tet = StraightCube(p[[0, 0, 0, 0, 1, 1, 2, 3]])
    v = abs(signed_volume(tet, depth=3).value)
    assert v < V3_ORACLE and V3_ORACLE - v < 1e-2


# -- areas in H^2 ---------------------------------------------------------------


def _angle(a, b, c):
    u = b + minkowski(a, b) * a
    v = c + minkowski(a, c) * a
    return math.acos(max(-1.0, min(1.0, minkowski(u, v) / math.sqrt(minkowski(u, u) * minkowski(v, v)))))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(0.05, 3), st.floats(0, 2 * math.pi)), min_size=3, max_size=3))
def test_triangle_area_matches_angle_defect(polar):
    x, y, z = (point_at([math.cos(t), math.sin(t)], r) for r, t in polar)
    # the angle oracle needs distinct, non-collinear vertices
    assume(min(distance(x, y), distance(y, z), distance(z, x)) > 1e-2)
    a = signed_area_triangle(x, y, z)
    assume(abs(a) > 1e-6)
    defect = math.pi - _angle(x, y, z) - _angle(y, z, x) - _angle(z, x, y)
    assert abs(abs(a) - defect) < 1e-7
    assert abs(signed_area_triangle(x, z, y) + a) < 1e-12


def test_quad_area_matches_quadrature():
    rng = np.random.default_rng(11)
    for _ in range(10):
        v = random_points(rng, 4, n=2, radius=2.0)
        c = StraightCube(v)
        assert abs(signed_area_quad(*v) - signed_volume(c, depth=3).value) < 1e-8


# -- Lobachevsky and ideal tetrahedra ------------------------------------------


def test_lobachevsky_values():
    assert lobachevsky(0.0) == 0.0
    assert abs(lobachevsky(math.pi / 6) - LOB_PI_6) < 1e-14
    assert abs(lobachevsky(math.pi / 3) - LOB_PI_3) < 1e-14
    assert abs(3 * lobachevsky(math.pi / 3) - V3_ORACLE) < 1e-14
    assert abs(lobachevsky(math.pi / 2)) < 5e-14


def test_lobachevsky_symmetries():
    t = np.linspace(-4, 4, 97)
    assert np.allclose(lobachevsky(-t), -lobachevsky(t), atol=1e-15)
    assert np.allclose(lobachevsky(t + math.pi), lobachevsky(t), atol=1e-13)


def test_clausen_against_mpmath():
    xs = np.linspace(-7, 7, 401)
    ref = np.array([float(mpmath.clsin(2, x)) for x in xs])
    assert np.abs(clausen(xs) - ref).max() < 1e-13


@pytest.mark.parametrize("theta", [0.1, 0.5, math.pi / 6, 1.0, 2.0, 3.0])
def test_lobachevsky_against_integral(theta):
    ref, _ = quad(lambda t: -math.log(abs(2 * math.sin(t))), 0, theta, points=[math.pi] if theta > math.pi else None,
                  limit=200)
    assert abs(lobachevsky(theta) - ref) < 1e-9


def test_ideal_tetra_volumes():
    assert abs(ideal_tetra_volume(math.pi / 3, math.pi / 3, math.pi / 3) - V3_ORACLE) < 1e-14
    assert abs(ideal_tetra_volume(math.pi / 2, math.pi / 4, math.pi / 4) - CATALAN) < 5e-14
    assert ideal_tetra_volume(math.pi, 0.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        ideal_tetra_volume(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ideal_tetra_volume(-0.1, 1.0, math.pi - 0.9)


def test_coxeter_split():
    r = coxeter_check()
    assert len(r.volumes) == 5
    assert max(abs(v - V3_ORACLE) for v in r.volumes) < 1e-9
    assert abs(r.total - 5 * V3_ORACLE) < 5e-9
    corners = r.volumes[:4]
    assert max(corners) - min(corners) < 1e-12
    for angles in r.angles:
        assert abs(sum(angles) - math.pi) < 1e-12


# -- sampled identities ---------------------------------------------------------


def test_diameter_examples():
    rng = np.random.default_rng(12)
    p = random_points(rng, 1)
    assert diameter(StraightCube(p)) == 0.0
    x = random_points(rng, 2)
    assert diameter(StraightCube(x)) == pytest.approx(float(distance(x[0], x[1])), abs=1e-14)
    for _ in range(10):
        c = random_straight_cube(rng)
        r = diameter(c, grid=9)
        assert r.ok and r.value - 1e-12 <= r.grid_max <= r.value + 1e-8


def test_hull_containment_examples():
    rng = np.random.default_rng(13)
    seg = StraightCube(random_points(rng, 2))
    assert hull_containment(seg, grid=33)
    c = random_straight_cube(rng)
    assert hull_containment(c, grid=9)
    k = to_klein(c.vertices)
    far = k[np.argmax(np.linalg.norm(k - k.mean(axis=0), axis=1))]
    pushed = k.mean(axis=0) + 1.05 * (far - k.mean(axis=0))
    assert np.linalg.norm(pushed) < 1
    assert not hull_containment(c, samples=from_klein(pushed[None]))


def test_hull_lp_oracle_agrees():
    rng = np.random.default_rng(14)
    verts = rng.normal(size=(8, 3))
    pts = rng.normal(size=(60, 3)) * 0.8
    fast = points_in_hull(verts, pts)
    slow = np.array([_in_hull_lp(verts, p, 1e-9) for p in pts])
    assert np.array_equal(fast, slow)


def test_geodesic_test_examples():
    r = geodesic_test(regular_ideal_cube())
    assert r.is_geodesic and r.residuals.max() < 1e-12
    assert not geodesic_test(random_straight_cube(np.random.default_rng(15))).is_geodesic
    sq = StraightCube(random_points(np.random.default_rng(16), 4, n=2))
    r2 = geodesic_test(sq)
    assert r2.is_geodesic and r2.residuals.max() == 0.0


# -- straightening --------------------------------------------------------------


def _singular(label, rng, k=2):
    lifts = random_points(rng, 2 ** k, n=2)
    return SingularCube.from_array(label, lifts)


def test_straighten_is_idempotent():
    c = random_straight_cube(np.random.default_rng(17))
    z = FormalChain.of(c, 3)
    assert straighten(z) == z
    assert straighten(straighten(z)) == straighten(z)


def test_missing_lifts_rejected():
    with pytest.raises(ValueError):
        SingularCube("empty", ())


def test_singular_faces_commute():
    c = _singular("s", np.random.default_rng(18), k=3)
    for j in (1, 2):
        for jj in range(j + 1, 4):
            for i in (0, 1):
                for ii in (0, 1):
                    a = c.face(FacePattern(jj, ii)).face(FacePattern(j, i))
                    b = c.face(FacePattern(j, i)).face(FacePattern(jj - 1, ii))
                    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.lists(st.integers(-5, 5).filter(bool), min_size=1, max_size=6))
def test_straightening_is_a_chain_map(seed, coeffs):
    rng = np.random.default_rng(seed)
    z = FormalChain([(_singular(f"c{i}", rng), a) for i, a in enumerate(coeffs)], dim=2)
    assert boundary(straighten(z)) == straighten(boundary(z))
    assert l1_norm(straighten(z)) == l1_norm(z)


def test_singular_cube_evaluates_its_map():
    rng = np.random.default_rng(19)
    lifts = random_points(rng, 4, n=2)
    base = StraightCube(lifts)
    c = SingularCube.from_array("m", lifts, fn=base.evaluate)
    f = c.face(FacePattern(2, 1))
    t = np.array([[0.25], [0.75]])
    assert np.allclose(f.evaluate(t), base.evaluate(np.column_stack([t[:, 0], np.ones(2)])))
    (straight,) = list(straighten(FormalChain.of(f)))
    assert np.array_equal(straight.vertices, f.vertex_lifts())
