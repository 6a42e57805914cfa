"""Numerical checks of the hypotheses of the polyhedron theorem.

A convex polyhedron in E^n or H^n (n = 2, 3) with a face pairing is checked
for the three conditions that make the paired isometries generate a discrete
group with the polyhedron as fundamental domain, then developed to a finite
depth as corroboration.
"""

__version__ = "0.1.0"

from .config import DEFAULT, REMARK31, STRICT, Config
from .errors import (
    CycleError,
    GeometryError,
    Inconclusive,
    InputError,
    PairingError,
    StructuralError,
    TessellaError,
)
from .geometry import Geodesic, Hyperplane, Isometry, ModelSpace
from .io import Problem, load
from .pairing import EdgeCycle, FacePairing, cycle_family, validate_pairing
from .polyhedron import Polyhedron, build, classify, estimate_separation
from .verify import VerificationReport, verify_all
from .develop import enumerate_translates, presentation

__all__ = [
    "Config", "DEFAULT", "STRICT", "REMARK31",
    "TessellaError", "InputError", "GeometryError", "StructuralError", "PairingError", "CycleError", "Inconclusive",
    "ModelSpace", "Isometry", "Hyperplane", "Geodesic",
    "Problem", "load",
    "FacePairing", "EdgeCycle", "validate_pairing", "cycle_family",
    "Polyhedron", "build", "classify", "estimate_separation",
    "VerificationReport", "verify_all",
    "enumerate_translates", "presentation",
    "__version__",
]
