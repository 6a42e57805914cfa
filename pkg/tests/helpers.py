"""Small document builders shared by the tests."""

import numpy as np

from tessella import catalog
from tessella.geometry import Isometry, ModelSpace
from tessella.io import parse_document

E2 = ModelSpace("euclidean", 2)


def wedge_doc(phi, name="wedge"):
    """Euclidean wedge of opening angle phi, its two rays glued by the rotation through phi."""
    return {
        "name": name,
        "geometry": {"model": "euclidean", "dim": 2},
        "polyhedron": {
            "type": "halfspaces",
            "halfspaces": [
                {"id": "xray", "normal": [0.0, 1.0], "offset": 0.0},
                {"id": "yray", "normal": [float(np.sin(phi)), float(-np.cos(phi))], "offset": 0.0},
            ],
        },
        "pairing": [catalog._pair_entry("xray", "yray", Isometry.rotation(E2, phi), "r")],
    }


def _minkowski_reflection(u):
    eta = np.diag([-1.0, 1.0, 1.0])
    u = np.asarray(u, dtype=float)
    return np.eye(3) - 2.0 * np.outer(u, u) @ eta


def cusp_doc():
    """Region of H^2 between two geodesics meeting at the ideal point (1, 0), glued by a parabolic."""
    a = [-0.5, -0.5, -1.0]
    b = [-0.5, -0.5, 1.0]
    g = _minkowski_reflection([0.0, 0.0, 1.0]) @ _minkowski_reflection(a)
    return {
        "name": "cusp",
        "geometry": {"model": "hyperbolic", "dim": 2},
        "polyhedron": {"type": "halfspaces", "halfspaces": [{"id": "A", "normal": a}, {"id": "B", "normal": b}]},
        "pairing": [{"face": "A", "partner": "B", "name": "p", "matrix": g.tolist()}],
    }


def problem_of(doc):
    return parse_document(doc)
