import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tessella.errors import GeometryError
from tessella.geometry import Geodesic, Hyperplane, Isometry, ModelSpace, Tangent, golden_section, oriented_angle

E2 = ModelSpace("euclidean", 2)
H2 = ModelSpace("hyperbolic", 2)
H3 = ModelSpace("hyperbolic", 3)

coord = st.floats(-2.0, 2.0, allow_nan=False)


def lift(space, coords):
    y = np.asarray(coords, dtype=float)
    return space.point(np.concatenate([[np.sqrt(1.0 + y @ y)], y]))


def hpoint(x, y):
    return lift(H2, [x, y])


def test_hyperboloid_points_lie_on_sheet():
    p = hpoint(0.3, -1.2)
    assert H2.inner(p, p) == pytest.approx(-1.0, abs=1e-12)
    assert p[0] > 0


def test_distance_from_origin_matches_closed_form():
    # the point at hyperbolic distance t along the x axis is (cosh t, sinh t, 0)
    t = 1.7
    p = np.array([np.cosh(t), np.sinh(t), 0.0])
    assert H2.distance(H2.origin(), p) == pytest.approx(t, rel=1e-12)


def test_distance_stable_for_close_points():
    p = hpoint(0.5, 0.5)
    v = H2.project_tangent(p, np.array([0.0, 1e-9, 0.0]))
    q = H2.exp(p, v)
    assert H2.distance(p, q) == pytest.approx(H2.norm(v), rel=1e-5)


@settings(max_examples=40, deadline=None)
@given(coord, coord, coord, coord)
def test_exp_log_roundtrip(a, b, c, d):
    p, q = hpoint(a, b), hpoint(c, d)
    v = H2.log(p, q)
    assert np.allclose(H2.exp(p, v), q, atol=1e-8 * (1 + np.abs(q).max()))
    assert H2.norm(v) == pytest.approx(H2.distance(p, q), rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(coord, coord, coord, coord, st.floats(-3, 3), st.floats(-1.5, 1.5))
def test_isometries_preserve_distance(a, b, c, d, angle, t):
    g = Isometry.rotation(H2, angle) @ Isometry.boost(H2, t)
    p, q = hpoint(a, b), hpoint(c, d)
    assert H2.distance(g.apply(p), g.apply(q)) == pytest.approx(H2.distance(p, q), rel=1e-8, abs=1e-10)
    assert g.residual() < 1e-10


def test_compose_inverse_is_identity():
    g = Isometry.boost(H2, 0.8) @ Isometry.rotation(H2, 1.1)
    assert (g @ g.inverse()).deviation() < 1e-12
    assert g.power(3).distance_to(g @ g @ g) < 1e-10


def test_euclidean_rotation_power_four_is_identity():
    rho = Isometry.rotation(E2, np.pi / 2)
    assert rho.power(4).is_identity(1e-12)
    assert not rho.power(2).is_identity(1e-12)


def test_segment_map_sends_endpoints():
    p, q = hpoint(0.1, 0.2), hpoint(0.9, -0.3)
    p2, q2 = hpoint(-1.0, 0.4), H2.exp(hpoint(-1.0, 0.4), H2.unit(H2.project_tangent(hpoint(-1.0, 0.4), np.array([0.0, 1.0, 0.0]))) * H2.distance(p, q))
    g = Isometry.segment_map(H2, p, q, p2, q2)
    assert np.allclose(g.apply(p), p2, atol=1e-9)
    assert np.allclose(g.apply(q), q2, atol=1e-9)
    assert g.orientation() > 0


def test_segment_map_reversed_orientation():
    g = Isometry.segment_map(E2, E2.point([0, 0]), E2.point([1, 0]), E2.point([0, 0]), E2.point([0, 1]), orientation_preserving=False)
    assert g.orientation() < 0
    assert np.allclose(g.apply([1.0, 0.0]), [0.0, 1.0])


def test_check_rejects_non_isometry():
    bad = Isometry(E2, [[2.0, 0.0], [0.0, 1.0]], [0.0, 0.0])
    with pytest.raises(GeometryError):
        bad.check()


def test_oriented_angle_quarter_turn():
    x = E2.point([0.0, 0.0])
    t0 = Tangent(E2, x, np.array([1.0, 0.0]))
    t1 = Tangent(E2, x, np.array([0.0, 1.0]))
    assert oriented_angle(t0, t1, (t0, t1)) == pytest.approx(np.pi / 2)
    assert oriented_angle(t1, t0, (t0, t1)) == pytest.approx(3 * np.pi / 2)


def test_hyperplane_through_points_vanishes_on_them():
    a, b = hpoint(0.2, 0.1), hpoint(-0.5, 1.0)
    h = Hyperplane.through(H2, [a, b])
    assert abs(h.value(a)) < 1e-12 and abs(h.value(b)) < 1e-12
    assert h.flipped().value(hpoint(3, 3)) == pytest.approx(-h.value(hpoint(3, 3)))


def test_hyperplane_value_is_signed_distance():
    # the geodesic x = 0 in H^2 has unit normal (0, 1, 0)
    h = Hyperplane(H2, np.array([0.0, 1.0, 0.0]))
    p = np.array([np.cosh(0.7), np.sinh(0.7), 0.0])
    assert h.value(p) == pytest.approx(0.7, rel=1e-12)


def test_geodesic_foot_is_nearest_point():
    g = Geodesic.between(E2, E2.point([0, 0]), E2.point([2, 0]))
    x = E2.point([0.5, 1.5])
    assert g.distance(x) == pytest.approx(1.5)
    assert g.distance(E2.point([3, 0])) == pytest.approx(1.0)


def test_klein_chart_roundtrip():
    p = lift(H3, [0.3, -0.4, 1.2])
    assert np.allclose(H3.from_klein(H3.klein(p)), p, atol=1e-12)
    assert np.linalg.norm(H3.klein(p)) < 1


def test_golden_section_minimum():
    t, v = golden_section(lambda s: (s - 0.3) ** 2, 0.0, 1.0)
    assert t == pytest.approx(0.3, abs=1e-6)
    assert v == pytest.approx(0.0, abs=1e-10)
