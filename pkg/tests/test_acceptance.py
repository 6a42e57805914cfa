"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (even under
output capture) before asserting.  Tolerances are the pinned ones.
Run as a script for just the summary lines.
"""

import io
import itertools
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from tessella import catalog
from tessella.cli import run
from tessella.config import DEFAULT, REMARK31, STRICT
from tessella.develop import covering_check, enumerate_translates, formal_neighbours, overlap_check
from tessella.geometry import Isometry, ModelSpace
from tessella.io import fixture_names, load, parse_document
from tessella.pairing import cycle_family
from tessella.polyhedron import edge_midpoint, estimate_separation, face_center, sample_face
from tessella.verify import angle_terms, check_condition1, cycle_angles

H2 = ModelSpace("hyperbolic", 2)
TWO_PI = 2 * np.pi
POSITIVE = catalog.POSITIVE


def report(n, ok, detail, capsys=None):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


def cli(*argv):
    out = io.StringIO()
    t0 = time.perf_counter()
    code = run(list(argv), out)
    return code, out.getvalue(), time.perf_counter() - t0


def mod_2pi(x):
    r = math.remainder(x, TWO_PI)
    return abs(r)


# ---------------------------------------------------------------------------
# criterion checks (each returns (ok, detail))
# ---------------------------------------------------------------------------


def check_1():
    code, text, secs = cli("verify", "square_torus", "--json")
    doc = json.loads(text)
    prob = load("square_torus")
    fam = cycle_family(prob.polyhedron, prob.pairing)
    shape = [(c.n, c.multiplicity) for c in fam]
    alphas = [t.alpha for c in fam for t in angle_terms(prob.polyhedron, prob.pairing, c, edge_midpoint(prob.polyhedron, c.base_edge))]
    total = doc["components"]["condition2"]["details"][0]["total"]
    ok = (
        code == 0
        and shape == [(4, 1)]
        and all(abs(a - np.pi / 2) <= 1e-9 for a in alphas)
        and abs(total - TWO_PI) <= 1e-9
        and secs < 1.0
    )
    return ok, f"exit {code}, cycles {shape}, max|alpha-pi/2| {max(abs(a - np.pi / 2) for a in alphas):.1e}, total-2pi {total - TWO_PI:.1e}, {secs:.2f}s"


def check_2():
    code, text, secs = cli("verify", "octagon_genus2", "--json")
    doc = json.loads(text)
    prob = load("octagon_genus2")
    P = prob.polyhedron
    fam = cycle_family(P, prob.pairing)
    shape = [(c.n, c.multiplicity) for c in fam]
    alphas = [t.alpha for c in fam for t in angle_terms(P, prob.pairing, c, edge_midpoint(P, c.base_edge))]
    residual = max(c.cycle_iso.power(c.multiplicity).deviation() for c in fam)
    # circumradius oracle for interior angle pi/4: cosh R = cot(pi/8)^2
    R = float(H2.distance(H2.origin(), P.vertices[0]))
    oracle = math.acosh(1 / math.tan(np.pi / 8) ** 2)
    ok = (
        code == 0
        and [n for n, _ in shape] == [8]
        and all(abs(a - np.pi / 4) <= 1e-6 for a in alphas)
        and residual < 1e-7
        and secs < 5.0
        and abs(R - oracle) < 1e-12
    )
    return ok, f"exit {code}, cycles {shape}, max|alpha-pi/4| {max(abs(a - np.pi / 4) for a in alphas):.1e}, residual {residual:.1e}, R {R:.6f}, {secs:.2f}s"


def check_3():
    code, text, _ = cli("verify", "octagon_angle_pi3", "--json")
    doc = json.loads(text)
    c2 = doc["components"]["condition2"]["details"][0]
    comb = c2["combinatorial_total"]
    dcode, dtext, _ = cli("develop", "octagon_angle_pi3", "--unsafe", "--depth", "1", "--json")
    dev = json.loads(dtext)
    ok = (
        code == 1
        and doc["failing"] == ["condition2"]
        and abs(comb - 8 * np.pi / 3) <= 1e-6
        and dcode == 1
        and dev["overlap"]["status"] == "fail"
    )
    return ok, f"exit {code}, failing {doc['failing']}, angle sum {comb:.9f} (8pi/3 = {8 * np.pi / 3:.9f}), develop exit {dcode}, overlap {dev['overlap']['status']}"


def check_4():
    code, text, _ = cli("verify", "reflection_square", "--json")
    doc = json.loads(text)
    ok = code == 1 and doc["failing"] == ["condition1"]
    return ok, f"exit {code}, failing {doc['failing']}"


def random_doubled_triangle(rng):
    """A hyperbolic triangle with angles pi*p/q, doubled across one side.

    The doubled quadrilateral B, A', C, A is paired by the rotations about B
    and C through twice the triangle angles there; the vertex cycle at A
    closes after the triangle-group relation.  Random placement by an
    isometry.
    """
    while True:
        q = rng.integers(3, 13, size=3)
        p = np.array([rng.integers(1, max(2, qq // 2 + 1)) for qq in q])
        alpha, beta, gamma = np.pi * p / q
        if beta < np.pi / 2 and gamma < np.pi / 2 and alpha < np.pi and alpha + beta + gamma < np.pi - 1e-3:
            break
    cosh_a = (np.cos(alpha) + np.cos(beta) * np.cos(gamma)) / (np.sin(beta) * np.sin(gamma))
    cosh_c = (np.cos(gamma) + np.cos(alpha) * np.cos(beta)) / (np.sin(alpha) * np.sin(beta))
    a, c = np.arccosh(cosh_a), np.arccosh(cosh_c)
    B = H2.origin()
    C = np.array([np.cosh(a), np.sinh(a), 0.0])
    A = np.array([np.cosh(c), np.sinh(c) * np.cos(beta), np.sinh(c) * np.sin(beta)])
    A2 = A * np.array([1.0, 1.0, -1.0])
    place = Isometry.rotation(H2, rng.uniform(0, TWO_PI)) @ Isometry.boost(H2, rng.uniform(0, 1.5)) @ Isometry.rotation(H2, rng.uniform(0, TWO_PI))
    verts = place.apply(np.array([B, A2, C, A]))
    doc = {
        "name": "doubled_triangle",
        "geometry": {"model": "hyperbolic", "dim": 2},
        "polyhedron": {"type": "polygon", "vertices": verts.tolist()},
        "pairing": [
            catalog._pair_entry("s0", "s3", catalog.side_pairing(H2, verts, 0, 3), "b"),
            catalog._pair_entry("s2", "s1", catalog.side_pairing(H2, verts, 2, 1), "c"),
        ],
    }
    return doc, (alpha, beta, gamma)


def check_5(count=100, seed=20261018):
    rng = np.random.default_rng(seed)
    worst_mod, worst_const, cycles_seen, failures = 0.0, 0.0, 0, []
    for i in range(count):
        doc, angles = random_doubled_triangle(rng)
        prob = parse_document(doc)
        P, fp = prob.polyhedron, prob.pairing
        if check_condition1(P, fp).status != "pass":
            failures.append((i, "condition1"))
            continue
        for c in cycle_family(P, fp, STRICT, DEFAULT):
            res = cycle_angles(P, fp, c, points=5)
            cycles_seen += 1
            worst_mod = max(worst_mod, max(mod_2pi(t) for t in res["totals"]))
            worst_const = max(worst_const, res["constancy"])
    ok = not failures and worst_mod <= 1e-6 and worst_const < 1e-6
    return ok, f"{count} polygons, {cycles_seen} cycles, max dist to 2piZ {worst_mod:.1e}, max constancy {worst_const:.1e}, failures {failures[:3]}"


def lattice_ball(L):
    return sum(1 for i, j in itertools.product(range(-L, L + 1), repeat=2) if abs(i) + abs(j) <= L)


def check_6():
    prob = load("square_torus")
    P, fp = prob.polyhedron, prob.pairing
    fam = cycle_family(P, fp)
    counts, tiles = [], True
    for L in (1, 2, 3):
        dev = enumerate_translates(P, fp, L)
        counts.append(len(dev))
        tiles &= overlap_check(dev, P, 64, 1.0).passed and covering_check(dev, P, samples=256, d_hat=1.0, family=fam).passed
    q = load("quadrant")
    qcounts = [len(enumerate_translates(q.polyhedron, q.pairing, L)) for L in (3, 4, 5, 6)]
    oracle = [lattice_ball(L) for L in (1, 2, 3)]
    ok = counts == oracle == [5, 13, 25] and tiles and qcounts == [4, 4, 4, 4]
    return ok, f"square {counts} (lattice {oracle}), overlap+covering {'pass' if tiles else 'fail'}, quadrant L=3..6 {qcounts}"


def check_7():
    bad, checked = [], 0
    for name in POSITIVE:
        prob = load(name)
        P, fp = prob.polyhedron, prob.pairing
        fam = cycle_family(P, fp)
        for f in P.faces:
            for x in sample_face(P, f.id, 3):
                checked += 1
                if len(formal_neighbours(P, fp, x, fam)) != 2:
                    bad.append((name, f.id))
        for c in fam:
            for e in c.edges():
                checked += 1
                if len(formal_neighbours(P, fp, edge_midpoint(P, e), fam)) != c.n * c.multiplicity:
                    bad.append((name, e))
    return not bad, f"{checked} boundary points over {len(POSITIVE)} fixtures, mismatches {bad[:3]}"


def check_8():
    q = load("quadrant")
    ks = {}
    for mode in (STRICT, REMARK31):
        fam = cycle_family(q.polyhedron, q.pairing, mode)
        ks[mode] = [(c.n, c.multiplicity, c.mode) for c in fam]
    disagree = []
    for name in fixture_names():
        a = cli("verify", name, "--mode", STRICT)[0]
        b = cli("verify", name, "--mode", REMARK31)[0]
        if a != b:
            disagree.append((name, a, b))
    ok = ks[STRICT] == [(1, 4, STRICT)] and ks[REMARK31] == [(1, 4, REMARK31)] and not disagree
    return ok, f"quadrant strict {ks[STRICT]}, remark31 {ks[REMARK31]}, verdict disagreements {disagree}"


def _run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "tessella", *args], capture_output=True, cwd=cwd)


def check_9(tmp):
    outs = []
    for i in range(2):
        v = _run_cli(["verify", "octagon_genus2", "--json"], tmp).stdout
        d = _run_cli(["develop", "octagon_genus2", "--depth", "2", "--json", "--svg", f"dev{i}.svg"], tmp).stdout
        svg = (tmp / f"dev{i}.svg").read_bytes()
        outs.append((v, d, svg))
    (v1, d1, s1), (v2, d2, s2) = outs
    ok = v1 == v2 and d1 == d2 and s1 == s2 and len(v1) > 0 and len(s1) > 0
    return ok, f"verify json {len(v1)} bytes, develop json {len(d1)} bytes, svg {len(s1)} bytes, identical: {v1 == v2}/{d1 == d2}/{s1 == s2}"


def unit_square_oracle():
    """Minimum of the closed-form distances over every Strong Simplicity pair of the unit square."""
    corners = [np.array(p, float) for p in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    sides = [(corners[i], corners[(i + 1) % 4]) for i in range(4)]

    def point_segment(x, a, b):
        t = np.clip((x - a) @ (b - a) / ((b - a) @ (b - a)), 0, 1)
        return float(np.linalg.norm(x - (a + t * (b - a))))

    d = [float(np.linalg.norm(a - b)) for a, b in itertools.combinations(corners, 2)]
    d += [point_segment(c, *s) for c in corners for s in sides if not any(np.array_equal(c, e) for e in s)]
    # non-adjacent sides are parallel: distance between the carriers
    d += [point_segment(sides[i][0], *sides[(i + 2) % 4]) for i in range(2)]
    return min(d)


def check_10():
    P = load("square_torus").polyhedron
    d_hat = estimate_separation(P).d_hat
    oracle = unit_square_oracle()
    ok = abs(d_hat - oracle) <= 0.01 * oracle and oracle == 1.0
    return ok, f"d_hat {d_hat:.9f}, oracle {oracle}"


# ---------------------------------------------------------------------------
# pytest entry points
# ---------------------------------------------------------------------------


def test_criterion_1_square_torus(capsys):
    assert report(1, *check_1(), capsys=capsys)


def test_criterion_2_genus2_octagon(capsys):
    assert report(2, *check_2(), capsys=capsys)


def test_criterion_3_negative_octagon(capsys):
    assert report(3, *check_3(), capsys=capsys)


def test_criterion_4_condition1_negative(capsys):
    assert report(4, *check_4(), capsys=capsys)


def test_criterion_5_angle_sum_law(capsys):
    assert report(5, *check_5(), capsys=capsys)


def test_criterion_6_development_oracle(capsys):
    assert report(6, *check_6(), capsys=capsys)


def test_criterion_7_formal_neighbour_counts(capsys):
    assert report(7, *check_7(), capsys=capsys)


def test_criterion_8_mode_agreement(capsys):
    assert report(8, *check_8(), capsys=capsys)


def test_criterion_9_determinism(capsys, tmp_path):
    assert report(9, *check_9(tmp_path), capsys=capsys)


def test_criterion_10_separation_estimator(capsys):
    assert report(10, *check_10(), capsys=capsys)


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        checks = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, lambda: check_9(Path(d)), check_10]
        results = [report(i, *fn()) for i, fn in enumerate(checks, 1)]
    sys.exit(0 if all(results) else 1)
