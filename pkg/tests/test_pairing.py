import numpy as np
import pytest

from tessella.config import DEFAULT, REMARK31, STRICT
from tessella.errors import CycleError, PairingError
from tessella.geometry import Isometry
from tessella.io import load_document, parse_document
from tessella.pairing import FacePairing, cycle_family, trace_cycle, validate_pairing

from helpers import problem_of, wedge_doc


def test_partner_inferred_with_inverse(problem):
    fp = problem("octagon_genus2").pairing
    for s, sb in fp.partner.items():
        assert fp.partner[sb] == s
        assert (fp.iso[s] @ fp.iso[sb]).deviation() < 1e-10


def test_letters_and_generator_order(problem):
    fp = problem("octagon_genus2").pairing
    assert fp.generators() == ["a", "b", "c", "d"]
    assert fp.letter("s0") == ("a", 1)
    assert fp.letter("s2") == ("a", -1)


def test_face_paired_twice_rejected():
    g = Isometry.identity(problem_of(wedge_doc(1.0)).polyhedron.space)
    with pytest.raises(PairingError):
        FacePairing.from_entries([("a", "b", g, None, None), ("a", "c", g, None, None)])


def test_validate_reports_edge_images(problem):
    prob = problem("square_torus")
    rep = validate_pairing(prob.polyhedron, prob.pairing)
    assert rep.ok
    # the translation by (1, 0) sends the lower-left corner to the lower-right one
    assert rep.edge_images[("left", "v0")] == "v1"
    assert rep.max_involution_deviation < 1e-12


def test_pairing_that_misses_partner_face_is_invalid():
    doc = load_document("square_torus")
    doc["pairing"][0]["translation"] = [1.5, 0.0]
    prob = parse_document(doc)
    rep = validate_pairing(prob.polyhedron, prob.pairing)
    assert not rep.ok
    assert rep.violations[0]["kind"] in {"face_image", "edge_image"}


def test_square_cycle_oracle(problem):
    # the four corners form one cycle: left -> right, bottom -> top, ...
    prob = problem("square_torus")
    c = trace_cycle(prob.polyhedron, prob.pairing, "v0")
    assert c.n == 4
    assert sorted(c.edges()) == ["v0", "v1", "v2", "v3"]
    assert c.cycle_iso.deviation() < 1e-12


def test_cycle_terms_chain(problem):
    prob = problem("hexagonal_torus")
    fp = prob.pairing
    c = trace_cycle(prob.polyhedron, fp, "v0")
    for t, nxt in zip(c.terms, c.terms[1:] + c.terms[:1]):
        # each term's last face is paired onto the next term's first face
        assert fp.partner[t.face_to] == nxt.face_from


def test_partial_isometries_map_base_edge(problem):
    prob = problem("octagon_genus2")
    P, fp = prob.polyhedron, prob.pairing
    c = trace_cycle(P, fp, "v0")
    x = P.edge("v0").point
    for t in c.terms:
        assert P.space.distance(t.partial.apply(x), P.edge(t.edge).point) < 1e-8


def test_backward_orientation_same_edges(problem):
    prob = problem("octagon_genus2")
    fwd = trace_cycle(prob.polyhedron, prob.pairing, "v0", "forward")
    bwd = trace_cycle(prob.polyhedron, prob.pairing, "v0", "backward")
    assert sorted(fwd.edges()) == sorted(bwd.edges())
    assert (fwd.cycle_iso @ bwd.cycle_iso).deviation() < 1e-8


def test_quadrant_multiplicity_four_in_both_modes(problem):
    prob = problem("quadrant")
    for mode in (STRICT, REMARK31):
        (c,) = cycle_family(prob.polyhedron, prob.pairing, mode)
        assert (c.n, c.multiplicity) == (1, 4)
        assert len(c.geometric_terms()) == 4


def test_octagon_pi3_needs_three_turns(problem):
    prob = problem("octagon_angle_pi3")
    (c,) = cycle_family(prob.polyhedron, prob.pairing)
    assert (c.n, c.multiplicity) == (8, 3)


def test_irrational_rotation_never_closes():
    prob = problem_of(wedge_doc(1.0))
    with pytest.raises(CycleError, match="64"):
        cycle_family(prob.polyhedron, prob.pairing, STRICT, DEFAULT)


def test_rational_wedge_closes():
    prob = problem_of(wedge_doc(2 * np.pi / 5))
    (c,) = cycle_family(prob.polyhedron, prob.pairing)
    assert c.multiplicity == 5


def test_family_covers_each_edge_once(problem):
    prob = problem("hexagonal_torus")
    fam = cycle_family(prob.polyhedron, prob.pairing)
    edges = [e for c in fam for e in c.edges()]
    assert sorted(edges) == sorted(e.id for e in prob.polyhedron.edges)
