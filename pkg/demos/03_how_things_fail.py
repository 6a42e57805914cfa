"""Four ways a face pairing can miss the hypotheses, and what the report says.

Run: python3 demos/03_how_things_fail.py
"""

import numpy as np

from tessella import Isometry, load, verify_all
from tessella.develop import local_ball_check
from tessella.io import parse_document
from tessella.pairing import cycle_family


def show(title, prob):
    r = verify_all(prob.polyhedron, prob.pairing)
    print(f"{title}: {r.verdict}")
    for c in r.components():
        if c.status == "fail":
            print(f"  {c.name}: {c.message}")
    return r


# 1. angles pi/3 instead of pi/4: the eight corners add up to 8pi/3, and the
#    vertex cycle closes only after going round three times
prob = load("octagon_angle_pi3")
show("octagon with angles pi/3", prob)
fam = cycle_family(prob.polyhedron, prob.pairing)
v = prob.polyhedron.edge("v0").point
print("  tiles around a vertex:", local_ball_check(prob.polyhedron, prob.pairing, v, samples=64, family=fam).message)

# 2. a reflection glues the left side to the right side but keeps the interior
#    on the same side, so the neighbour tile lands on top of the square
show("square glued by a reflection", load("reflection_square"))

# 3. a wedge of one radian glued by the rotation through one radian never
#    closes up: no power of the rotation is the identity
E2 = load("square_torus").polyhedron.space
wedge = {
    "name": "wedge",
    "geometry": {"model": "euclidean", "dim": 2},
    "polyhedron": {"type": "halfspaces", "halfspaces": [
        {"id": "xray", "normal": [0.0, 1.0], "offset": 0.0},
        {"id": "yray", "normal": [float(np.sin(1.0)), float(-np.cos(1.0))], "offset": 0.0},
    ]},
    "pairing": [{"face": "xray", "partner": "yray", "name": "r", "matrix": Isometry.rotation(E2, 1.0).linear.tolist(), "translation": [0.0, 0.0]}],
}
show("wedge of angle 1", parse_document(wedge))

# 4. two geodesics meeting at an ideal point: every pairing check passes, but
#    the faces come arbitrarily close, so Strong Simplicity fails
eta = np.diag([-1.0, 1.0, 1.0])
a, b = np.array([-0.5, -0.5, -1.0]), np.array([-0.5, -0.5, 1.0])


def reflection(u):
    return np.eye(3) - 2.0 * np.outer(u, u) @ eta


cusp = {
    "name": "cusp",
    "geometry": {"model": "hyperbolic", "dim": 2},
    "polyhedron": {"type": "halfspaces", "halfspaces": [{"id": "A", "normal": a.tolist()}, {"id": "B", "normal": b.tolist()}]},
    "pairing": [{"face": "A", "partner": "B", "name": "p", "matrix": (reflection(np.array([0.0, 0.0, 1.0])) @ reflection(a)).tolist()}],
}
show("region with a cusp", parse_document(cusp))
