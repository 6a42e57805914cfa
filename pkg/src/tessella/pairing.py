"""Face pairings, cycles of edges, and geometric cycles.

A cycle term is written ``(s̄_j, I_j e, s_{j+1})``: the edge ``I_j e`` seen
between the faces ``s̄_j`` and ``s_{j+1}``.  Applying ``I_{s_{j+1}}`` moves
the edge onto ``s̄_{j+1}``, and the next face is the other face of the image
edge.  The cycle closes when the initial term comes back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .config import DEFAULT, REMARK31, STRICT, Config, pmap
from .errors import CycleError, GeometryError, PairingError
from .geometry import Isometry
from .polyhedron import Polyhedron, sample_edge, sample_face

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True, eq=False)
class FacePairing:
    partner: Mapping[str, str]
    iso: Mapping[str, Isometry]
    # generator name for each face; s and s̄ share a name, s̄ carries exponent -1
    names: Mapping[str, str] = field(default_factory=dict)
    # declared edge images: face -> {edge of face: edge of partner}
    edge_map: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    exponents: Mapping[str, int] = field(default_factory=dict)
    generator_order: tuple[str, ...] = ()

    @classmethod
    def from_entries(cls, entries, face_order=None) -> "FacePairing":
        """Build from ``(face, partner, isometry, name, edge_map)`` tuples.

        A face listed only as someone's partner gets the inverse isometry.
        """
        partner, iso, names, emap, exponent = {}, {}, {}, {}, {}
        for face, other, g, name, edges in entries:
            if face in partner:
                raise PairingError(f"face {face!r} is paired twice", witness=face)
            partner[face], iso[face] = other, g
            if edges:
                emap[face] = dict(edges)
            if name is not None:
                names[face] = name
        for face, other in list(partner.items()):
            if other not in partner:
                partner[other], iso[other] = face, iso[face].inverse()
                if face in emap:
                    emap[other] = {v: k for k, v in emap[face].items()}
        # declared faces carry exponent +1, in declaration order
        declared = [face for face, *_ in entries]
        rest = [f for f in (face_order if face_order is not None else partner) if f not in declared]
        for face in declared + rest:
            if face in exponent:
                continue
            other = partner[face]
            name = names.get(face) or names.get(other) or face
            names[face] = names[other] = name
            exponent[face] = 1
            if other != face:
                exponent[other] = -1
        generator_order = tuple(dict.fromkeys(names[f] for f in declared + rest))
        return cls(partner, iso, names, emap, exponent, generator_order)

    def letter(self, face: str) -> tuple[str, int]:
        """Generator name and exponent (+1/-1) of ``I_face``."""
        return self.names.get(face, face), self.exponents.get(face, 1)

    def generators(self, face_order=()) -> list[str]:
        """Generator names: declared order first, then any left over in face order."""
        seen = list(self.generator_order)
        for f in face_order:
            name, _ = self.letter(f)
            if name not in seen:
                seen.append(name)
        return seen


@dataclass
class PairingReport:
    violations: list[dict]
    edge_images: dict[tuple[str, str], str]
    max_involution_deviation: float = 0.0
    max_face_residual: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_pairing(P: Polyhedron, fp: FacePairing, config: Config = DEFAULT, samples: int | None = None) -> PairingReport:
    """Check the pairing invariants and compute the edge images ``I_s e``."""
    samples = samples or config.samples
    violations: list[dict] = []
    face_ids = [f.id for f in P.faces]
    missing = [f for f in face_ids if f not in fp.partner or f not in fp.iso]
    if missing:
        violations.append({"kind": "missing", "faces": missing, "message": f"faces without a pairing: {missing}"})
        return PairingReport(violations, {})
    unknown = sorted(set(fp.partner) - set(face_ids)) + sorted({p for p in fp.partner.values() if p not in face_ids})
    if unknown:
        violations.append({"kind": "unknown_face", "faces": unknown, "message": f"pairing names unknown faces: {unknown}"})
        return PairingReport(violations, {})

    worst_inv = 0.0
    for s in face_ids:
        sb = fp.partner[s]
        if fp.partner[sb] != s:
            violations.append({"kind": "involution", "face": s, "message": f"partner map is not an involution at {s}"})
            continue
        g = fp.iso[s]
        if g.space != P.space:
            violations.append({"kind": "space", "face": s, "message": f"isometry of {s} lives in {g.space}"})
            continue
        try:
            g.check(config.tol_iso)
        except GeometryError as exc:
            violations.append({"kind": "not_isometry", "face": s, "deviation": g.residual(), "message": f"I_{s}: {exc}"})
        dev = fp.iso[sb].compose(g).deviation()
        worst_inv = max(worst_inv, dev)
        if dev >= config.tol_iso:
            violations.append({"kind": "involution_isometry", "face": s, "deviation": dev, "message": f"I_{sb} I_{s} deviates from identity by {dev:.3g}"})
    if violations:
        return PairingReport(violations, {}, worst_inv)

    worst_face = 0.0
    for s in face_ids:
        sb = P.face(fp.partner[s])
        pts = fp.iso[s].apply(sample_face(P, s, samples))
        if not len(pts):
            continue
        off = np.abs(sb.carrier.value(pts))
        out = -np.minimum(sb.bound_margin(pts), 0.0)
        r = float(np.max(np.maximum(off, out)))
        worst_face = max(worst_face, r)
        if r > config.tol_mem:
            i = int(np.argmax(np.maximum(off, out)))
            violations.append({"kind": "face_image", "face": s, "deviation": r, "point": pts[i].tolist(), "message": f"I_{s} maps face {s} off face {sb.id} (by {r:.3g})"})

    images: dict[tuple[str, str], str] = {}
    for s in face_ids:
        sb = fp.partner[s]
        declared = fp.edge_map.get(s, {})
        for e in P.face(s).edge_ids:
            pts = fp.iso[s].apply(sample_edge(P, e, min(8, samples)))
            hits = [
                c for c in P.face(sb).edge_ids
                if float(np.max(P.edge(c).distance(P.space, pts))) <= config.tol_mem
            ]
            if len(hits) != 1:
                violations.append({"kind": "edge_image", "face": s, "edge": e, "candidates": hits, "message": f"I_{s}({e}) matches {len(hits)} edges of {sb}"})
                continue
            if e in declared and declared[e] != hits[0]:
                violations.append({"kind": "edge_declared", "face": s, "edge": e, "declared": declared[e], "found": hits[0], "message": f"I_{s}({e}) is {hits[0]} geometrically but declared {declared[e]}"})
                continue
            images[(s, e)] = hits[0]
        got = [images.get((s, e)) for e in P.face(s).edge_ids]
        if None not in got and len(set(got)) != len(got):
            violations.append({"kind": "edge_image", "face": s, "message": f"I_{s} is not injective on the edges of {s}"})
    return PairingReport(violations, images, worst_inv, worst_face)


# ---------------------------------------------------------------------------
# cycles
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CycleTerm:
    face_from: str  # s̄_j
    edge: str  # I_j e
    face_to: str  # s_{j+1}
    partial: Isometry  # I_j

    def key(self):
        return (self.face_from, self.edge, self.face_to)

    def __str__(self):
        return f"{self.face_from} ⋄ {self.edge} ⋄ {self.face_to}"


@dataclass(frozen=True, eq=False)
class EdgeCycle:
    base_edge: str
    orientation: str
    terms: tuple[CycleTerm, ...]
    cycle_iso: Isometry
    multiplicity: int = 1
    mode: str | None = None  # None while only combinatorial
    notes: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.terms)

    @property
    def length(self) -> int:
        return self.n * self.multiplicity

    @property
    def geometric(self) -> bool:
        return self.mode is not None

    def faces_applied(self) -> list[str]:
        """``s_1, ..., s_n``: the faces whose pairing advances each term."""
        return [t.face_to for t in self.terms]

    def edges(self) -> list[str]:
        return [t.edge for t in self.terms]

    def geometric_terms(self) -> list[CycleTerm]:
        """The ``n k`` terms of the k-fold cycle, with ``I_{mn+r} = I_r I^m``."""
        out, power = [], Isometry.identity(self.cycle_iso.space)
        for m in range(self.multiplicity):
            for t in self.terms:
                out.append(CycleTerm(t.face_from, t.edge, t.face_to, t.partial.compose(power)))
            power = self.cycle_iso.compose(power)
            if (m + 1) % 32 == 0:
                power = power.renormalized()
        return out

    def with_multiplicity(self, k: int, mode: str, notes=()) -> "EdgeCycle":
        return EdgeCycle(self.base_edge, self.orientation, self.terms, self.cycle_iso, k, mode, tuple(notes))

    def arrow(self) -> str:
        return " → ".join(f"({t})" for t in self.terms) + f" → ({self.terms[0]})"

    def __repr__(self):
        return f"EdgeCycle({self.base_edge}, n={self.n}, k={self.multiplicity}, mode={self.mode})"


def _start(P, e, orientation):
    a, b = P.edge(e).incident_faces
    if orientation == FORWARD:
        return a, b
    if orientation == BACKWARD:
        return b, a
    raise ValueError(f"orientation must be {FORWARD!r} or {BACKWARD!r}")


def trace_cycle(P: Polyhedron, fp: FacePairing, e: str, orientation: str = FORWARD, edge_images=None, n_max: int | None = None) -> EdgeCycle:
    """Trace the combinatorial cycle of edges through ``e``."""
    if edge_images is None:
        report = validate_pairing(P, fp)
        if not report.ok:
            raise PairingError("pairing is invalid: " + report.violations[0]["message"], witness=report.violations[0])
        edge_images = report.edge_images
    n_max = n_max or 10 * max(1, len(P.edges))
    space = P.space
    first, second = _start(P, e, orientation)
    start = (first, e, second)
    terms = [CycleTerm(first, e, second, Isometry.identity(space))]
    key = start
    partial = Isometry.identity(space)
    while True:
        f_from, edge, f_to = key
        image = edge_images.get((f_to, edge))
        if image is None:
            raise CycleError(f"edge {edge} of face {f_to} has no image edge", witness=key)
        new_from = fp.partner[f_to]
        faces = P.edge(image).incident_faces
        if new_from not in faces:
            raise CycleError(f"image edge {image} is not an edge of {new_from}", witness=key)
        new_to = faces[1] if faces[0] == new_from else faces[0]
        partial = fp.iso[f_to].compose(partial)
        if len(terms) % 32 == 0:
            partial = partial.renormalized()
        key = (new_from, image, new_to)
        if key == start:
            break
        if len(terms) >= n_max:
            raise CycleError(f"cycle through {e} did not close within {n_max} terms", witness=e)
        terms.append(CycleTerm(new_from, image, new_to, partial))
    return EdgeCycle(e, orientation, tuple(terms), partial)


def _fixes_edge(P, g: Isometry, edge: str, tol: float) -> bool:
    pts = sample_edge(P, edge, 8 if P.edge(edge).line is not None else 1)
    return float(np.max(P.space.distance(g.apply(pts), pts))) <= tol


def edge_anchor(P: Polyhedron, edge: str) -> np.ndarray:
    e = P.edge(edge)
    return e.point if e.point is not None else e.line.base


def local_rotation(P: Polyhedron, cycle: EdgeCycle) -> tuple[np.ndarray, float]:
    """The cycle isometry seen from its base edge, as an orthogonal matrix.

    Conjugating by a frame at a point of the edge turns the cycle isometry
    into a map fixing the origin, whose powers stay well conditioned even
    when the edge is far out on the hyperboloid.  The polar factor of the
    spatial block is the nearest rotation; the second value is how far the
    conjugated map was from it.
    """
    space = P.space
    T = Isometry.to_point(space, edge_anchor(P, cycle.base_edge))
    h = T.inverse() @ cycle.cycle_iso @ T
    block = h.linear[1:, 1:] if space.hyperbolic else h.linear
    u, _, vt = np.linalg.svd(block)
    rot = u @ vt
    exact = np.eye(space.ambient) if space.hyperbolic else np.eye(space.dim)
    exact[-len(rot):, -len(rot):] = rot
    return rot, float(np.abs(h.linear - exact).max())


def cycle_residual(P: Polyhedron, cycle: EdgeCycle) -> float:
    """Deviation of ``I^k`` from the identity, measured in the base edge's frame."""
    rot, defect = local_rotation(P, cycle)
    power = np.linalg.matrix_power(rot, cycle.multiplicity)
    return max(defect, float(np.abs(power - np.eye(len(rot))).max()))


def _strict_k(P, cycle, config):
    rot, _ = local_rotation(P, cycle)
    power = np.eye(len(rot))
    for k in range(1, config.k_max + 1):
        power = rot @ power
        if np.abs(power - np.eye(len(rot))).max() < config.tol_iso:
            return k
    return None


def _remark31_k(P, fp, cycle, config):
    from .verify import total_angle

    power = Isometry.identity(cycle.cycle_iso.space)
    base_total = None
    for k in range(1, config.k_max + 1):
        power = cycle.cycle_iso.compose(power)
        if k % 32 == 0:
            power = power.renormalized()
        if not _fixes_edge(P, power, cycle.base_edge, config.tol_mem):
            continue
        if base_total is None:
            base_total = total_angle(P, fp, cycle.with_multiplicity(1, REMARK31), config=config)
        total = k * base_total
        r = np.mod(total, 2 * np.pi)
        if min(r, 2 * np.pi - r) < config.tol_ang:
            return k
    return None


def make_geometric(P: Polyhedron, fp: FacePairing, cycle: EdgeCycle, mode: str = STRICT, config: Config = DEFAULT) -> EdgeCycle:
    """Smallest multiple of the combinatorial cycle that is geometric."""
    k_strict = _strict_k(P, cycle, config)
    if mode == STRICT:
        if k_strict is None:
            raise CycleError(f"no power I^k, k <= {config.k_max}, of the cycle isometry at {cycle.base_edge} is the identity", witness=cycle.base_edge)
        return cycle.with_multiplicity(k_strict, STRICT)
    if mode != REMARK31:
        raise ValueError(f"unknown mode {mode!r}")
    k_r = _remark31_k(P, fp, cycle, config)
    if k_r is None and k_strict is None:
        raise CycleError(f"no k <= {config.k_max} makes the cycle at {cycle.base_edge} geometric (remark31 mode)", witness=cycle.base_edge)
    if k_r is None or (k_strict is not None and k_strict != k_r):
        note = f"remark31 gave k={k_r}, strict gave k={k_strict}; strict preferred"
        return cycle.with_multiplicity(k_strict, STRICT, [note])
    return cycle.with_multiplicity(k_r, REMARK31)


def cycle_family(P: Polyhedron, fp: FacePairing, mode: str = STRICT, config: Config = DEFAULT, edge_images=None) -> list[EdgeCycle]:
    """Disjoint geometric cycles covering every edge, in edge declaration order."""
    if edge_images is None:
        report = validate_pairing(P, fp, config)
        if not report.ok:
            raise PairingError("pairing is invalid: " + report.violations[0]["message"], witness=report.violations[0])
        edge_images = report.edge_images
    covered: dict[str, str] = {}
    combinatorial = []
    for edge in P.edges:
        if edge.id in covered:
            continue
        c = trace_cycle(P, fp, edge.id, FORWARD, edge_images)
        for e in set(c.edges()):
            if e in covered:
                raise CycleError(f"edge {e} lies on the cycles of {covered[e]} and {edge.id}", witness=e)
            covered[e] = edge.id
        combinatorial.append(c)
    missing = [e.id for e in P.edges if e.id not in covered]
    if missing:
        raise CycleError(f"edges not covered by any cycle: {missing}", witness=missing)
    return pmap(lambda c: make_geometric(P, fp, c, mode, config), combinatorial)
