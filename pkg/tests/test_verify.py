import numpy as np
import pytest

from tessella.config import DEFAULT
from tessella.geometry import Hyperplane, ModelSpace
from tessella.pairing import cycle_family
from tessella.polyhedron import HalfspaceSpec, build
from tessella.verify import (
    FAIL, PASS, SKIPPED,
    angle_terms, check_condition1, check_condition3, epsilon_grid, interior_angle, total_angle, verify_all,
)

from helpers import cusp_doc, problem_of, wedge_doc

E2 = ModelSpace("euclidean", 2)


def run(prob, **kw):
    return verify_all(prob.polyhedron, prob.pairing, DEFAULT.updated(**kw))


@pytest.mark.parametrize("name", ["square_torus", "hexagonal_torus", "octagon_genus2", "quadrant", "prism_e3", "free_group_strip"])
def test_positive_fixtures_pass(problem, name):
    r = run(problem(name))
    assert r.overall == PASS, r.failing
    assert r.verdict == "verified (numerically)"


def test_square_angles_are_right_angles(problem):
    prob = problem("square_torus")
    (c,) = cycle_family(prob.polyhedron, prob.pairing)
    x = prob.polyhedron.edge(c.base_edge).point
    alphas = [t.alpha for t in angle_terms(prob.polyhedron, prob.pairing, c, x)]
    assert np.allclose(alphas, np.pi / 2, atol=1e-12)


def test_hexagon_total_angle(problem):
    prob = problem("hexagonal_torus")
    for c in cycle_family(prob.polyhedron, prob.pairing):
        assert total_angle(prob.polyhedron, prob.pairing, c) == pytest.approx(2 * np.pi, abs=1e-9)


def test_interior_angle_of_regular_octagon_matches_formula(problem):
    # cosh R = cot(pi/N) cot(alpha/2) inverted for the shipped circumradius
    prob = problem("octagon_genus2")
    P = prob.polyhedron
    R = P.space.distance(P.space.origin(), P.vertices[0])
    alpha = 2 * np.arctan(1 / (np.cosh(R) * np.tan(np.pi / 8)))
    (c,) = cycle_family(P, prob.pairing)
    a = interior_angle(P, prob.pairing, c, 0, P.edge(c.base_edge).point).alpha
    assert a == pytest.approx(alpha, abs=1e-9)
    assert a == pytest.approx(np.pi / 4, abs=1e-9)


def test_prism_angles_constant_along_edge(problem):
    r = run(problem("prism_e3"))
    assert r.angle_constancy < 1e-9


def test_reflection_blames_condition1(problem):
    r = run(problem("reflection_square"))
    assert r.failing == ["condition1"]
    assert r.sectors.status == SKIPPED
    prob = problem("reflection_square")
    res = check_condition1(prob.polyhedron, prob.pairing)
    assert res.margin == pytest.approx(2.0, abs=1e-9)


def test_pi3_octagon_blames_condition2_only(problem):
    r = run(problem("octagon_angle_pi3"))
    assert r.failing == ["condition2"]
    d = r.condition2.details[0]
    assert d["combinatorial_total"] == pytest.approx(8 * np.pi / 3, abs=1e-6)
    assert d["total"] == pytest.approx(8 * np.pi, abs=1e-6)


def test_irrational_wedge_fails_cycles():
    r = run(problem_of(wedge_doc(1.0)))
    assert "cycles" in r.failing
    assert r.condition2.status == SKIPPED


def test_cusp_fails_strong_simplicity():
    # the two faces share an ideal point, so their distance has infimum zero
    r = run(problem_of(cusp_doc()))
    assert r.failing == ["structural"]
    assert r.structural.witness["kind"] == "face-face"
    assert np.allclose(r.structural.witness["ideal_point"], [1.0, 1.0, 0.0], atol=1e-9)


def test_thin_wedge_violates_condition3():
    cfg = DEFAULT.updated(tol_mem=1e-6)
    phi = 1e-7
    P = build(E2, HalfspaceSpec([
        ("a", Hyperplane(E2, np.array([0.0, 1.0]), 0.0)),
        ("b", Hyperplane(E2, np.array([np.sin(phi), -np.cos(phi)]), 0.0)),
    ]), cfg)
    r = check_condition3(P, config=cfg)
    assert r.status == FAIL
    assert r.witness["faces"] == ["a", "b"]


def test_ordinary_wedge_satisfies_condition3():
    P = problem_of(wedge_doc(0.3)).polyhedron
    assert check_condition3(P).status == PASS


def test_epsilon_grid_is_decreasing_to_floor():
    g = epsilon_grid(1.0, 1e-9)
    assert g[0] == 0.5
    assert np.all(np.diff(g) < 0)
    assert g[-1] >= 1e-9


def test_report_components_order(problem):
    r = run(problem("square_torus"))
    assert [c.name for c in r.components()] == ["structural", "pairing", "cycles", "condition1", "condition2", "condition3", "sectors"]
    assert all(c.as_dict()["status"] == PASS for c in r.components())
