class TessellaError(Exception):
    """Base class for all errors raised by tessella."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(TessellaError, ValueError):
    """Malformed input: schema, shapes, unresolved ids, mismatched spaces."""


class GeometryError(TessellaError):
    """A degenerate geometric configuration (collinear frame, bad normal...)."""


class StructuralError(TessellaError):
    """The polyhedron violates one of the cornerless-polyhedron axioms."""

    def __init__(self, message, kind="structure", witness=None):
        super().__init__(message, witness)
        self.kind = kind


class PairingError(TessellaError):
    """The face-pairing is inconsistent with the polyhedron."""


class CycleError(TessellaError):
    """A cycle of edges could not be traced or made geometric."""


class Inconclusive(TessellaError):
    """A numerical decision fell inside an ambiguity band."""
