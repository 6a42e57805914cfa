import numpy as np
import pytest

from tessella.errors import StructuralError
from tessella.geometry import Hyperplane, ModelSpace
from tessella.polyhedron import (
    EDGE, EXTERIOR, FACE, INTERIOR,
    HalfspaceSpec, PolygonSpec, build, classify, edge_midpoint, estimate_separation,
    face_center, interior_normal, locate, sample_edge, sample_face, sample_interior, van_der_corput,
)

E2 = ModelSpace("euclidean", 2)
E3 = ModelSpace("euclidean", 3)
H2 = ModelSpace("hyperbolic", 2)

SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]


def square():
    return build(E2, PolygonSpec(SQUARE, ["bottom", "right", "top", "left"]))


def test_polygon_faces_and_edges():
    P = square()
    assert [f.id for f in P.faces] == ["bottom", "right", "top", "left"]
    assert len(P.edges) == 4
    # vertex v0 sits between the last and first sides
    assert sorted(P.edge("v0").incident_faces) == ["bottom", "left"]
    assert P.bounded


def test_clockwise_input_keeps_inward_normals():
    P = build(E2, PolygonSpec(SQUARE[::-1]))
    x = np.array([0.5, 0.5])
    assert all(f.value(x) > 0 for f in P.faces)


def test_self_crossing_polygon_rejected():
    with pytest.raises(StructuralError):
        build(E2, PolygonSpec([[0, 0], [1, 1], [1, 0], [0, 1]]))


def test_classify_square():
    P = square()
    X = np.array([[0.5, 0.5], [0.5, 0.0], [0.0, 0.0], [2.0, 0.5], [1.0, 0.3]])
    codes, elem = classify(P, X)
    assert codes.tolist() == [INTERIOR, FACE, EDGE, EXTERIOR, FACE]
    assert P.faces[elem[1]].id == "bottom"
    assert P.faces[elem[4]].id == "right"
    assert str(locate(P, [0.5, 0.0])) == "boundary(face bottom)"


def test_halfspace_prism_incidence():
    planes = [
        ("x0", Hyperplane(E3, np.array([1.0, 0, 0]), 0.0)),
        ("x1", Hyperplane(E3, np.array([-1.0, 0, 0]), -1.0)),
        ("y0", Hyperplane(E3, np.array([0, 1.0, 0]), 0.0)),
    ]
    P = build(E3, HalfspaceSpec(planes))
    pairs = sorted(tuple(sorted(e.incident_faces)) for e in P.edges)
    assert pairs == [("x0", "y0"), ("x1", "y0")]
    assert not P.bounded


def test_empty_halfspace_intersection_rejected():
    planes = [("a", Hyperplane(E2, np.array([1.0, 0]), 1.0)), ("b", Hyperplane(E2, np.array([-1.0, 0]), 1.0))]
    with pytest.raises(StructuralError):
        build(E2, HalfspaceSpec(planes))


def test_declared_incidence_mismatch_rejected():
    planes = [("a", Hyperplane(E2, np.array([1.0, 0]), 0.0)), ("b", Hyperplane(E2, np.array([0, 1.0]), 0.0))]
    with pytest.raises(StructuralError):
        build(E2, HalfspaceSpec(planes, edges=[("o", ("a", "a"))]))


def test_samples_lie_where_they_claim():
    P = square()
    for f in P.faces:
        codes, elem = classify(P, sample_face(P, f.id, 9))
        assert (codes == FACE).all()
        assert {P.faces[i].id for i in elem} == {f.id}
    codes, _ = classify(P, sample_interior(P, 50))
    assert (codes == INTERIOR).all()
    assert np.allclose(edge_midpoint(P, "v2"), [1.0, 1.0])
    assert sample_edge(P, "v2", 3).shape == (3, 2)


def test_interior_normal_points_inward():
    P = square()
    n = interior_normal(P, "left", face_center(P, P.face("left")))
    assert np.allclose(n.vec / np.linalg.norm(n.vec), [1.0, 0.0])


def test_van_der_corput_prefix():
    # the leading zero is skipped
    assert np.allclose(van_der_corput(4), [0.5, 0.25, 0.75, 0.125])


def test_separation_unit_square():
    # non-adjacent sides are 1 apart; a vertex is 1 from every side it does not touch
    sep = estimate_separation(square())
    assert sep.d_hat == pytest.approx(1.0, rel=1e-6)
    assert sep.ok


def test_separation_rectangle_oracle():
    P = build(E2, PolygonSpec([[0, 0], [2, 0], [2, 0.5], [0, 0.5]]))
    # brute force over closed-form distances: the short sides' endpoints are 0.5 apart
    assert estimate_separation(P).d_hat == pytest.approx(0.5, rel=1e-6)


def test_separation_hyperbolic_octagon(problem):
    P = problem("octagon_genus2").polyhedron
    # opposite-ish sides of the regular octagon; vertices one apart are separated by a side length
    side = H2.distance(P.vertices[0], P.vertices[1])
    d = estimate_separation(P).d_hat
    assert 0 < d <= side + 1e-9


def test_separation_cornerless_quadrant_has_no_pairs(problem):
    assert estimate_separation(problem("quadrant").polyhedron).d_hat == np.inf
