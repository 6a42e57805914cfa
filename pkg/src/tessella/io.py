"""JSON input documents: schema, parsing, canonical serialisation, fixtures."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .config import DEFAULT, Config
from .errors import InputError, TessellaError
from .geometry import Hyperplane, Isometry, ModelSpace
from .pairing import FacePairing
from .polyhedron import HalfspaceSpec, PolygonSpec, Polyhedron, build

_vector = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 4}
_matrix = {"type": "array", "items": _vector, "minItems": 2, "maxItems": 4}

SCHEMA = {
    "type": "object",
    "required": ["geometry", "polyhedron", "pairing"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "geometry": {
            "type": "object",
            "required": ["model", "dim"],
            "properties": {"model": {"enum": ["euclidean", "hyperbolic"]}, "dim": {"enum": [2, 3]}},
            "additionalProperties": False,
        },
        "polyhedron": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["type", "vertices"],
                    "properties": {
                        "type": {"const": "polygon"},
                        "vertices": {"type": "array", "items": _vector, "minItems": 2},
                        "face_ids": {"type": "array", "items": {"type": "string"}},
                        "edge_ids": {"type": "array", "items": {"type": "string"}},
                        "interior_witness": _vector,
                    },
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "required": ["type", "halfspaces"],
                    "properties": {
                        "type": {"const": "halfspaces"},
                        "halfspaces": {
                            "type": "array",
                            "minItems": 1,
                            "items": {
                                "type": "object",
                                "required": ["id", "normal"],
                                "properties": {"id": {"type": "string"}, "normal": _vector, "offset": {"type": "number"}},
                                "additionalProperties": False,
                            },
                        },
                        "edges": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["id", "faces"],
                                "properties": {
                                    "id": {"type": "string"},
                                    "faces": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                                },
                                "additionalProperties": False,
                            },
                        },
                        "interior_witness": _vector,
                    },
                    "additionalProperties": False,
                },
            ]
        },
        "pairing": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["face", "partner", "matrix"],
                "properties": {
                    "face": {"type": "string"},
                    "partner": {"type": "string"},
                    "name": {"type": "string"},
                    "matrix": _matrix,
                    "translation": _vector,
                    "edges": {"type": "object", "additionalProperties": {"type": "string"}},
                },
                "additionalProperties": False,
            },
        },
        "options": {
            "type": "object",
            "properties": {
                "tol_iso": {"type": "number", "exclusiveMinimum": 0},
                "tol_mem": {"type": "number", "exclusiveMinimum": 0},
                "tol_ang": {"type": "number", "exclusiveMinimum": 0},
                "samples": {"type": "integer", "minimum": 1},
                "mode": {"enum": ["strict", "remark31"]},
                "k_max": {"type": "integer", "minimum": 1},
                "window": {"type": "number", "exclusiveMinimum": 0},
                "seed": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
        "expected": {"type": "object"},
    },
    "additionalProperties": False,
}


@dataclass(eq=False)
class Problem:
    """A parsed input document."""

    name: str
    space: ModelSpace
    polyhedron: Polyhedron
    pairing: FacePairing
    config: Config
    expected: dict
    document: dict
    digest: str


def canonical_json(doc) -> str:
    """Sorted keys, no whitespace; floats use Python's shortest round-trip repr."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def document_digest(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


def fixture_names() -> list[str]:
    root = resources.files("tessella") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve(path_or_name) -> Path:
    """A file path, or the name of a shipped fixture (with or without ``fixtures/``)."""
    p = Path(path_or_name)
    if p.is_file():
        return p
    name = p.name[:-5] if p.name.endswith(".json") else p.name
    candidate = resources.files("tessella") / "fixtures" / f"{name}.json"
    if candidate.is_file():
        return Path(str(candidate))
    raise InputError(f"no such input file or fixture: {path_or_name}")


def load_document(path_or_name) -> dict:
    path = resolve(path_or_name)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from exc


def _isometry(space, entry):
    matrix = np.asarray(entry["matrix"], dtype=float)
    size = space.ambient if space.hyperbolic else space.dim
    if matrix.shape != (size, size):
        raise InputError(f"pairing matrix of face {entry['face']} must be {size}x{size}", witness=entry["face"])
    shift = entry.get("translation")
    if space.hyperbolic and shift is not None:
        raise InputError(f"hyperbolic pairing of face {entry['face']} cannot carry a translation")
    if shift is not None and len(shift) != size:
        raise InputError(f"translation of face {entry['face']} must have length {size}")
    try:
        return Isometry(space, matrix, None if shift is None else np.asarray(shift, dtype=float))
    except TessellaError as exc:
        raise InputError(str(exc), witness=entry["face"]) from exc


def _check_vectors(vectors, length, what):
    for v in vectors:
        if len(v) != length:
            raise InputError(f"{what} must have {length} coordinates, got {len(v)}")


def parse_document(doc: dict, base: Config = DEFAULT) -> Problem:
    """Validate a document and build the polyhedron and face pairing.

    Schema problems raise ``InputError``; geometric axiom violations raise
    ``StructuralError`` (callers report those as failed hypotheses).
    """
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {exc.message}") from None

    geo = doc["geometry"]
    space = ModelSpace(geo["model"], geo["dim"])
    config = base.updated(**doc.get("options", {}))
    pdoc = doc["polyhedron"]
    n = space.ambient
    if pdoc["type"] == "polygon":
        if space.dim != 2:
            raise InputError("polygon input needs dim 2")
        _check_vectors(pdoc["vertices"], n, "polygon vertices")
        try:
            verts = [space.point(v) for v in pdoc["vertices"]]
        except TessellaError as exc:
            raise InputError(str(exc)) from exc
        spec = PolygonSpec(verts, pdoc.get("face_ids"), pdoc.get("edge_ids"), pdoc.get("interior_witness"))
    else:
        hs = []
        for h in pdoc["halfspaces"]:
            _check_vectors([h["normal"]], n, f"normal of {h['id']}")
            if space.hyperbolic and "offset" in h:
                raise InputError(f"hyperbolic half-space {h['id']} cannot carry an offset")
            try:
                hs.append((h["id"], Hyperplane(space, np.asarray(h["normal"], float), float(h.get("offset", 0.0)))))
            except TessellaError as exc:
                raise InputError(str(exc), witness=h["id"]) from exc
        edges = [(e["id"], tuple(e["faces"])) for e in pdoc["edges"]] if "edges" in pdoc else None
        spec = HalfspaceSpec(hs, edges, pdoc.get("interior_witness"))
    if spec.interior_witness is not None:
        _check_vectors([spec.interior_witness], n, "interior_witness")

    P = build(space, spec, config)
    face_ids = [f.id for f in P.faces]
    entries = []
    for entry in doc["pairing"]:
        for key in ("face", "partner"):
            if entry[key] not in face_ids:
                raise InputError(f"pairing refers to unknown face {entry[key]!r}", witness=entry[key])
        emap = entry.get("edges")
        if emap:
            edge_ids = {e.id for e in P.edges}
            bad = [k for k in list(emap) + list(emap.values()) if k not in edge_ids]
            if bad:
                raise InputError(f"pairing of {entry['face']} refers to unknown edges {bad}")
        entries.append((entry["face"], entry["partner"], _isometry(space, entry), entry.get("name"), emap))
    try:
        fp = FacePairing.from_entries(entries, face_ids)
    except TessellaError as exc:
        raise InputError(str(exc)) from exc
    missing = [f for f in face_ids if f not in fp.partner]
    if missing:
        raise InputError(f"faces without a pairing entry: {missing}")
    return Problem(doc.get("name", ""), space, P, fp, config, doc.get("expected", {}), doc, document_digest(doc))


def _floats(a):
    return np.asarray(a, dtype=float).tolist()


def to_document(problem: Problem) -> dict:
    """Serialise a parsed problem back to an input document.

    Built from the parsed objects (normalised points and normals), so
    ``to_document(parse(to_document(p)))`` reproduces itself up to rounding.
    """
    P, fp, space = problem.polyhedron, problem.pairing, problem.space
    doc = {k: problem.document[k] for k in ("name", "description", "expected") if k in problem.document}
    doc["geometry"] = {"model": space.kind, "dim": space.dim}
    if P.construction == "polygon":
        doc["polyhedron"] = {"type": "polygon", "vertices": _floats(P.vertices), "face_ids": [f.id for f in P.faces], "edge_ids": [e.id for e in P.edges]}
    else:
        hs = []
        for f in P.faces:
            h = {"id": f.id, "normal": _floats(f.interior_sign * f.carrier.normal)}
            if not space.hyperbolic:
                h["offset"] = float(f.interior_sign * f.carrier.offset)
            hs.append(h)
        doc["polyhedron"] = {"type": "halfspaces", "halfspaces": hs, "edges": [{"id": e.id, "faces": list(e.incident_faces)} for e in P.edges]}
    entries = []
    for f in P.faces:
        if fp.exponents.get(f.id, 1) != 1:
            continue
        g = fp.iso[f.id]
        entry = {"face": f.id, "partner": fp.partner[f.id], "name": fp.names.get(f.id, f.id), "matrix": _floats(g.linear)}
        if not space.hyperbolic:
            entry["translation"] = _floats(g.shift)
        if f.id in fp.edge_map:
            entry["edges"] = dict(fp.edge_map[f.id])
        entries.append(entry)
    doc["pairing"] = entries
    changed = {k: v for k, v in problem.config.as_dict().items() if v != getattr(DEFAULT, k)}
    if changed:
        doc["options"] = changed
    return doc


def load(path_or_name, base: Config = DEFAULT) -> Problem:
    return parse_document(load_document(path_or_name), base)
