import io
import json
import subprocess
import sys

import pytest

from tessella import __version__
from tessella.cli import run
from tessella.io import document_digest, load_document


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


@pytest.mark.parametrize(
    "name, code",
    [
        ("square_torus", 0),
        ("octagon_genus2", 0),
        ("quadrant", 0),
        ("free_group_strip", 0),
        ("octagon_angle_pi3", 1),
        ("reflection_square", 1),
        ("malformed_schema", 3),
        ("malformed_shape", 3),
    ],
)
def test_verify_exit_codes(name, code):
    assert call("verify", name)[0] == code


def test_missing_file_is_input_error(capsys):
    assert call("verify", "no_such_thing.json")[0] == 3
    assert "input error" in capsys.readouterr().err


def test_text_report_names_failing_condition():
    code, text = call("verify", "octagon_angle_pi3")
    assert code == 1
    assert "condition2   fail" in text
    assert "verdict: hypotheses violated" in text


def test_json_report_provenance():
    code, text = call("verify", "square_torus", "--json", "--tol-ang", "1e-7")
    doc = json.loads(text)
    prov = doc["provenance"]
    assert prov["version"] == __version__
    assert prov["input"]["sha256"] == document_digest(load_document("square_torus"))
    assert prov["tolerances"]["tol_ang"] == 1e-7
    assert doc["overall"] == "pass"
    assert doc["cycles"][0]["n"] == 4
    assert "time" not in text.lower()


def test_json_infinite_separation_is_a_string():
    doc = json.loads(call("verify", "quadrant", "--json")[1])
    assert doc["separation"]["d_hat"] == "inf"


def test_cycles_arrow_notation():
    code, text = call("cycles", "square_torus")
    assert code == 0
    assert "n=4 k=1" in text
    assert "⋄" in text and "→" in text


def test_cycles_irrational_wedge_fails(tmp_path):
    from helpers import wedge_doc

    p = tmp_path / "wedge.json"
    p.write_text(json.dumps(wedge_doc(1.0)))
    code, text = call("cycles", str(p))
    assert code == 1
    assert "no geometric cycle family" in text


def test_presentation_text():
    code, text = call("presentation", "square_torus")
    assert code == 0
    assert text.splitlines()[0] == "generators: a, b"
    assert len(text.splitlines()) == 2


def test_develop_refuses_failed_input():
    code, text = call("develop", "octagon_angle_pi3", "--depth", "1")
    assert code == 1
    assert "--unsafe" in text


def test_develop_square(tmp_path):
    svg = tmp_path / "sq.svg"
    code, text = call("develop", "square_torus", "--depth", "2", "--svg", str(svg))
    assert code == 0
    assert "13 translates" in text
    assert svg.read_text().startswith("<?xml")


def test_develop_json_and_custom_ball():
    code, text = call("develop", "square_torus", "--depth", "1", "--json", "--center", "0.5,0.5", "--radius", "3")
    doc = json.loads(text)
    assert code == 1
    assert doc["covering"]["status"] == "fail"
    assert doc["overlap"]["status"] == "pass"


def test_bad_center_is_input_error():
    assert call("develop", "square_torus", "--center", "0.5")[0] == 3


def test_structural_failure_exit_one(tmp_path):
    doc = load_document("square_torus")
    doc["polyhedron"]["vertices"] = [[0, 0], [1, 1], [1, 0], [0, 1]]
    p = tmp_path / "bowtie.json"
    p.write_text(json.dumps(doc))
    code, text = call("verify", str(p))
    assert code == 1
    assert "structural" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tessella", "verify", "square_torus"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "verified (numerically)" in proc.stdout
