"""Builders for the shipped fixture documents.

Each builder returns a plain JSON-ready dict.  ``python -m tessella.catalog``
rewrites ``fixtures/*.json`` from these builders; the test suite checks the
shipped files still match.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .geometry import Isometry, ModelSpace

E2 = ModelSpace("euclidean", 2)
H2 = ModelSpace("hyperbolic", 2)
E3 = ModelSpace("euclidean", 3)


def _floats(a):
    return np.asarray(a, dtype=float).tolist()


def _pair_entry(face, partner, g: Isometry, name=None):
    entry = {"face": face, "partner": partner}
    if name:
        entry["name"] = name
    entry["matrix"] = _floats(g.linear)
    if not g.space.hyperbolic:
        entry["translation"] = _floats(g.shift)
    return entry


def regular_octagon_radius(angle: float, sides: int = 8) -> float:
    """Circumradius of the regular hyperbolic N-gon with the given interior angle.

    From the right triangle (centre, vertex, side midpoint):
    cosh R = cot(pi/N) cot(angle/2).
    """
    return float(np.arccosh(1.0 / (np.tan(np.pi / sides) * np.tan(angle / 2.0))))


def regular_polygon(space, sides: int, radius: float, phase: float = 0.0):
    ang = phase + 2 * np.pi * np.arange(sides) / sides
    if space.hyperbolic:
        return np.column_stack([np.full(sides, np.cosh(radius)), np.sinh(radius) * np.cos(ang), np.sinh(radius) * np.sin(ang)])
    return radius * np.column_stack([np.cos(ang), np.sin(ang)])


def side_pairing(space, verts, i: int, j: int) -> Isometry:
    """Orientation-preserving map of side i onto side j, reversing boundary direction."""
    m = len(verts)
    return Isometry.segment_map(space, verts[i], verts[(i + 1) % m], verts[(j + 1) % m], verts[j])


def square_torus():
    sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    return {
        "name": "square_torus",
        "description": "Unit square, opposite sides glued by translations: the flat torus.",
        "geometry": {"model": "euclidean", "dim": 2},
        "polyhedron": {"type": "polygon", "vertices": sq, "face_ids": ["bottom", "right", "top", "left"]},
        "pairing": [
            _pair_entry("left", "right", Isometry.translation(E2, [1.0, 0.0]), "a"),
            _pair_entry("bottom", "top", Isometry.translation(E2, [0.0, 1.0]), "b"),
        ],
        "expected": {
            "verify": "pass",
            "cycles": [[4, 1]],
            "alpha": float(np.pi / 2),
            "translates": {"1": 5, "2": 13, "3": 25},
            "presentation": {"generators": ["a", "b"], "relation_lengths": [4]},
        },
    }


def hexagonal_torus():
    verts = regular_polygon(E2, 6, 1.0)
    pairs = []
    for i, name in zip(range(3), "abc"):
        j = i + 3
        shift = -(verts[i] + verts[(i + 1) % 6])
        pairs.append(_pair_entry(f"s{i}", f"s{j}", Isometry.translation(E2, shift), name))
    return {
        "name": "hexagonal_torus",
        "description": "Regular Euclidean hexagon, opposite sides glued by translations.",
        "geometry": {"model": "euclidean", "dim": 2},
        "polyhedron": {"type": "polygon", "vertices": _floats(verts)},
        "pairing": pairs,
        "expected": {
            "verify": "pass",
            "cycles": [[3, 1], [3, 1]],
            "alpha": float(2 * np.pi / 3),
            "translates": {"1": 7},
            "presentation": {"generators": ["a", "b", "c"], "relation_lengths": [3, 3]},
        },
    }


def _octagon(name, angle, description, expected):
    verts = regular_polygon(H2, 8, regular_octagon_radius(angle))
    pairs = []
    for (i, j), g in zip([(0, 2), (1, 3), (4, 6), (5, 7)], "abcd"):
        pairs.append(_pair_entry(f"s{i}", f"s{j}", side_pairing(H2, verts, i, j), g))
    return {
        "name": name,
        "description": description,
        "geometry": {"model": "hyperbolic", "dim": 2},
        "polyhedron": {"type": "polygon", "vertices": _floats(verts)},
        "pairing": pairs,
        "expected": expected,
    }


def octagon_genus2():
    return _octagon(
        "octagon_genus2",
        np.pi / 4,
        "Regular hyperbolic octagon with angles pi/4, sides glued by a b a^-1 b^-1 c d c^-1 d^-1: genus-2 surface.",
        {
            "verify": "pass",
            "cycles": [[8, 1]],
            "alpha": float(np.pi / 4),
            "translates": {"1": 9},
            "presentation": {"generators": ["a", "b", "c", "d"], "relation_lengths": [8]},
        },
    )


def octagon_angle_pi3():
    return _octagon(
        "octagon_angle_pi3",
        np.pi / 3,
        "Same gluing on a regular octagon with angles pi/3: the vertex cycle has total angle 8pi/3.",
        {
            "verify": "fail",
            "failing": ["condition2"],
            "cycles": [[8, 3]],
            "alpha": float(np.pi / 3),
            "combinatorial_total": float(8 * np.pi / 3),
        },
    )


def quadrant():
    rho = Isometry.rotation(E2, np.pi / 2)
    return {
        "name": "quadrant",
        "description": "Quadrant x>=0, y>=0; the x-ray is glued to the y-ray by a quarter turn.",
        "geometry": {"model": "euclidean", "dim": 2},
        "polyhedron": {
            "type": "halfspaces",
            "halfspaces": [{"id": "xray", "normal": [0.0, 1.0], "offset": 0.0}, {"id": "yray", "normal": [1.0, 0.0], "offset": 0.0}],
            "edges": [{"id": "o", "faces": ["xray", "yray"]}],
        },
        "pairing": [_pair_entry("xray", "yray", rho, "r")],
        "expected": {
            "verify": "pass",
            "cycles": [[1, 4]],
            "alpha": float(np.pi / 2),
            "translates": {"3": 4, "4": 4, "5": 4},
            "presentation": {"generators": ["r"], "relation_lengths": [4]},
        },
    }


def prism_e3():
    hs = [
        {"id": "x0", "normal": [1.0, 0.0, 0.0], "offset": 0.0},
        {"id": "x1", "normal": [-1.0, 0.0, 0.0], "offset": -1.0},
        {"id": "y0", "normal": [0.0, 1.0, 0.0], "offset": 0.0},
        {"id": "y1", "normal": [0.0, -1.0, 0.0], "offset": -1.0},
    ]
    edges = [
        {"id": "e00", "faces": ["x0", "y0"]},
        {"id": "e01", "faces": ["x0", "y1"]},
        {"id": "e10", "faces": ["x1", "y0"]},
        {"id": "e11", "faces": ["x1", "y1"]},
    ]
    return {
        "name": "prism_e3",
        "description": "Infinite square prism in E^3 with opposite strips glued by translations.",
        "geometry": {"model": "euclidean", "dim": 3},
        "polyhedron": {"type": "halfspaces", "halfspaces": hs, "edges": edges},
        "pairing": [
            _pair_entry("x0", "x1", Isometry.translation(E3, [1.0, 0.0, 0.0]), "a"),
            _pair_entry("y0", "y1", Isometry.translation(E3, [0.0, 1.0, 0.0]), "b"),
        ],
        "expected": {
            "verify": "pass",
            "cycles": [[4, 1]],
            "alpha": float(np.pi / 2),
            "translates": {"1": 5, "2": 13},
            "presentation": {"generators": ["a", "b"], "relation_lengths": [4]},
        },
    }


def free_group_strip(half_width: float = 0.5):
    a = half_width
    left = [-np.sinh(a), np.cosh(a), 0.0]
    right = [-np.sinh(a), -np.cosh(a), 0.0]
    return {
        "name": "free_group_strip",
        "description": "Region of H^2 between two geodesics with a common perpendicular, glued by a translation along it.",
        "geometry": {"model": "hyperbolic", "dim": 2},
        "polyhedron": {"type": "halfspaces", "halfspaces": [{"id": "L", "normal": left}, {"id": "R", "normal": right}]},
        "pairing": [_pair_entry("L", "R", Isometry.boost(H2, 2 * a), "a")],
        "expected": {
            "verify": "pass",
            "cycles": [],
            "translates": {"1": 3, "2": 5, "3": 7},
            "presentation": {"generators": ["a"], "relation_lengths": []},
        },
    }


def reflection_square():
    doc = square_torus()
    refl = Isometry(E2, [[-1.0, 0.0], [0.0, 1.0]], [1.0, 0.0])
    doc["name"] = "reflection_square"
    doc["description"] = "Unit square whose left side is glued to the right by the reflection x -> 1-x."
    doc["pairing"][0] = _pair_entry("left", "right", refl, "a")
    doc["expected"] = {"verify": "fail", "failing": ["condition1"]}
    return doc


def malformed_schema():
    doc = square_torus()
    del doc["pairing"]
    doc["name"] = "malformed_schema"
    doc["description"] = "Negative: the pairing block is missing."
    doc["expected"] = {"exit": 3}
    return doc


def malformed_shape():
    doc = square_torus()
    doc["name"] = "malformed_shape"
    doc["description"] = "Negative: a 3x3 matrix for a planar Euclidean isometry."
    doc["pairing"][0]["matrix"] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    doc["expected"] = {"exit": 3}
    return doc


BUILDERS = {
    f.__name__: f
    for f in (
        square_torus,
        hexagonal_torus,
        octagon_genus2,
        octagon_angle_pi3,
        quadrant,
        prism_e3,
        free_group_strip,
        reflection_square,
        malformed_schema,
        malformed_shape,
    )
}

POSITIVE = ("square_torus", "hexagonal_torus", "octagon_genus2", "quadrant", "prism_e3", "free_group_strip")


def render(doc) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def write_all(directory: Path) -> list[Path]:
    out = []
    for name, builder in BUILDERS.items():
        path = directory / f"{name}.json"
        path.write_text(render(builder()), encoding="utf-8")
        out.append(path)
    return out


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "fixtures"
    for p in write_all(target):
        print(p)
