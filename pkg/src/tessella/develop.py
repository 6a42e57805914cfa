"""Finite developments: formal neighbours, translates gP, tiling checks, output.

A word is a tuple of face ids ``(f_1, ..., f_m)`` standing for the isometry
``I_{f_1} ∘ ... ∘ I_{f_m}``.  The tiles adjacent to ``gP`` are ``g I_s P``,
so breadth-first search extends words on the right.

Everything here corroborates the tiling conclusions to a finite depth; none
of it proves them.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .config import DEFAULT, Config, pmap
from .errors import GeometryError, InputError
from .geometry import Isometry
from .pairing import EdgeCycle, FacePairing, trace_cycle
from .polyhedron import (
    AMBIGUOUS,
    EXTERIOR,
    INTERIOR,
    Polyhedron,
    classify,
    face_distance,
    locate,
    sample_interior,
)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def word_isometry(fp: FacePairing, word, space) -> Isometry:
    g = Isometry.identity(space)
    for i, f in enumerate(word):
        g = g @ fp.iso[f]
        if (i + 1) % 32 == 0:
            g = g.renormalized()
    return g


def inverse_word(fp: FacePairing, word) -> tuple:
    return tuple(fp.partner[f] for f in reversed(word))


def format_word(fp: FacePairing, word) -> str:
    if not word:
        return "1"
    out = []
    for f in word:
        name, e = fp.letter(f)
        out.append(name if e == 1 else f"{name}^-1")
    return " ".join(out)


# ---------------------------------------------------------------------------
# formal neighbours
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Neighbour:
    g: Isometry
    word: tuple
    point: np.ndarray  # x_g in P with g(x_g) = x


@dataclass(frozen=True, eq=False)
class FormalNeighbourSet:
    base_point: np.ndarray
    kind: str  # face | edge
    element: str
    entries: tuple[Neighbour, ...]

    def __len__(self):
        return len(self.entries)


def _cycle_through(P, fp, family, edge_id):
    """The geometric cycle started at ``edge_id`` (a rotation of the family cycle)."""
    for c in family:
        if edge_id in c.edges():
            fresh = trace_cycle(P, fp, edge_id)
            return fresh.with_multiplicity(c.multiplicity, c.mode)
    raise GeometryError(f"no geometric cycle contains edge {edge_id}")


def formal_neighbours(P: Polyhedron, fp: FacePairing, x, family: list[EdgeCycle] | None = None, config: Config = DEFAULT) -> FormalNeighbourSet:
    """The translates ``gP`` abutting P at the boundary point ``x``."""
    x = np.asarray(x, dtype=float)
    loc = locate(P, x, config.tol_mem)
    if loc.kind != "boundary":
        raise InputError(f"formal neighbours need a boundary point; {x.tolist()} is {loc.kind}")
    space = P.space
    if loc.element_kind == "face":
        s = loc.element
        sb = fp.partner[s]
        entries = (Neighbour(Isometry.identity(space), (), x), Neighbour(fp.iso[sb], (sb,), fp.iso[s].apply(x)))
        return FormalNeighbourSet(x, "face", s, entries)
    if family is None:
        from .pairing import cycle_family

        family = cycle_family(P, fp, config.mode, config)
    cycle = _cycle_through(P, fp, family, loc.element)
    applied = cycle.faces_applied() * cycle.multiplicity
    entries = []
    for j, term in enumerate(cycle.geometric_terms()):
        word = inverse_word(fp, tuple(reversed(applied[:j])))
        entries.append(Neighbour(term.partial.inverse(), word, term.partial.apply(x)))
    return FormalNeighbourSet(x, "edge", loc.element, tuple(entries))


# ---------------------------------------------------------------------------
# translates
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Translate:
    word: tuple
    g: Isometry


@dataclass
class Development:
    depth: int
    translates: list[Translate]
    ambiguous: list[tuple[tuple, tuple, float]] = field(default_factory=list)

    @property
    def status(self) -> str:
        return INCONCLUSIVE if self.ambiguous else PASS

    def __len__(self):
        return len(self.translates)


class _ElementTable:
    """Group elements keyed by a 1-Lipschitz scalar projection of the matrix.

    Two elements within ``band`` (relative max-norm) have projections within
    ``band * scale``, so a sorted-list range query never misses a candidate.
    """

    def __init__(self, size: int, tol: float, band: float):
        w = 1.0 / (np.arange(size) + np.sqrt(2.0))
        self.w = w / np.abs(w).sum()
        self.tol, self.band = tol, band
        self.keys: list[float] = []
        self.items: list[Translate] = []

    @staticmethod
    def _scale(g: Isometry) -> float:
        return max(1.0, float(np.abs(g.key()).max()))

    def find(self, g: Isometry):
        """``(match, ambiguous_with, distance)``; at most one of the first two is set."""
        k = g.key()
        c = float(self.w @ k)
        scale = self._scale(g)
        width = 2.0 * self.band * scale
        lo = bisect.bisect_left(self.keys, c - width)
        hi = bisect.bisect_right(self.keys, c + width)
        best = (None, np.inf)
        for i in range(lo, hi):
            other = self.items[i]
            d = float(np.abs(other.g.key() - k).max()) / max(scale, self._scale(other.g))
            if d < best[1]:
                best = (other, d)
        other, d = best
        if other is None or d >= self.band:
            return None, None, d
        if d < self.tol:
            return other, None, d
        return None, other, d

    def add(self, t: Translate):
        c = float(self.w @ t.g.key())
        i = bisect.bisect_right(self.keys, c)
        self.keys.insert(i, c)
        self.items.insert(i, t)


def enumerate_translates(P: Polyhedron, fp: FacePairing, depth: int, config: Config = DEFAULT) -> Development:
    """Breadth-first development of words of length <= depth, deduplicated by isometry."""
    if depth < 0:
        raise InputError("depth must be non-negative")
    space = P.space
    identity = Translate((), Isometry.identity(space))
    table = _ElementTable(identity.g.key().size, config.tol_iso, 20.0 * config.tol_iso)
    table.add(identity)
    out, ambiguous = [identity], []
    frontier = [identity]
    faces = [f.id for f in P.faces]
    for _ in range(depth):
        nxt = []
        for t in frontier:
            for s in faces:
                g = (t.g @ fp.iso[s]).renormalized()
                cand = Translate(t.word + (s,), g)
                match, amb, d = table.find(g)
                if match is not None:
                    continue
                if amb is not None:
                    ambiguous.append((amb.word, cand.word, d))
                    continue
                table.add(cand)
                out.append(cand)
                nxt.append(cand)
        frontier = nxt
    return Development(depth, out, ambiguous)


# ---------------------------------------------------------------------------
# tiling checks
# ---------------------------------------------------------------------------


@dataclass
class CheckOutcome:
    name: str
    status: str
    message: str = ""
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == PASS

    def as_dict(self):
        return {"status": self.status, "message": self.message, "witnesses": self.witnesses, "details": self.details}


def _inradius(P: Polyhedron) -> float:
    w = P.interior_witness
    return float(min(face_distance(P, f, w[None, :])[0] for f in P.faces))


def _step(P: Polyhedron, d_hat: float | None) -> float:
    if d_hat is not None and np.isfinite(d_hat):
        return d_hat
    return 2.0 * _inradius(P)


def overlap_check(dev: Development, P: Polyhedron, samples: int = 64, d_hat: float | None = None, config: Config = DEFAULT) -> CheckOutcome:
    """Interior samples of each translate must not fall inside any other translate."""
    near = _step(P, d_hat) / 10.0
    X = sample_interior(P, samples, near_faces=near)
    witnesses = []
    # bounded tiles sit inside balls around the witness orbit; far pairs cannot overlap
    centers = np.array([t.g.apply(P.interior_witness) for t in dev.translates])
    reach = 2.0 * float(P.space.distance(P.vertices, P.interior_witness).max()) if P.bounded else np.inf

    def scan(i):
        found = []
        Y = dev.translates[i].g.apply(X)
        close = P.space.distance(centers, centers[i]) <= reach + 1e-9 if np.isfinite(reach) else np.ones(len(centers), bool)
        for j, h in enumerate(dev.translates):
            if j == i or not close[j]:
                continue
            codes, _ = classify(P, h.g.inverse().apply(Y), config.tol_mem)
            hit = np.nonzero(codes == INTERIOR)[0]
            if len(hit):
                found.append({"g": dev.translates[i].word, "h": h.word, "point": Y[hit[0]].tolist()})
        return found

    for found in pmap(scan, range(len(dev.translates))):
        witnesses.extend(found)
    if witnesses:
        return CheckOutcome("overlap", FAIL, f"{len(witnesses)} overlapping translate pair(s)", witnesses[:10], {"points": len(X)})
    return CheckOutcome("overlap", PASS, f"no interior overlap among {len(dev)} translates ({len(X)} samples each)", [], {"points": len(X)})


def ball_samples(P: Polyhedron, center, r: float, n: int) -> np.ndarray:
    """Deterministic quasi-uniform points of the closed ball B(center, r)."""
    space = P.space
    center = np.asarray(center, dtype=float)
    basis = space.tangent_basis(center)
    dim = space.dim
    z = 2.0 * qmc.Halton(d=dim, scramble=False).random(4 * n + 1)[1:] - 1.0
    z = z[(z * z).sum(axis=1) <= 1.0][:n]
    return space.exp(np.repeat(center[None, :], len(z), axis=0), r * z @ basis)


def closing_depth(family) -> int:
    """Word length needed before the tiles around every edge close up."""
    return max([1] + [-(-c.length // 2) for c in family or ()])


def default_radius(P: Polyhedron, depth: int, d_hat: float | None, family=None) -> float:
    """Inradius plus half a separation step per level beyond the closing depth."""
    return _inradius(P) + max(depth - closing_depth(family), 0) * _step(P, d_hat) / 2.0


def coverage(dev: Development, P: Polyhedron, Y, config: Config = DEFAULT) -> np.ndarray:
    covered = np.zeros(len(Y), dtype=bool)
    for t in dev.translates:
        codes, _ = classify(P, t.g.inverse().apply(Y), config.tol_mem)
        covered |= codes != EXTERIOR
    return covered


def covering_check(dev: Development, P: Polyhedron, center=None, r: float | None = None, samples: int = 256, d_hat: float | None = None, config: Config = DEFAULT, family=None) -> CheckOutcome:
    """Every sample of B(center, r) must lie in some translate."""
    center = P.interior_witness if center is None else P.space.point(center)
    if r is None:
        r = default_radius(P, dev.depth, d_hat, family)
    Y = ball_samples(P, center, r, samples)
    covered = coverage(dev, P, Y, config)
    details = {"center": np.asarray(center).tolist(), "radius": float(r), "points": int(len(Y)), "covered_fraction": float(covered.mean()) if len(Y) else 1.0}
    if covered.all():
        return CheckOutcome("covering", PASS, f"B(center, {r:.4g}) covered to depth {dev.depth}", [], details)
    d = P.space.distance(Y[~covered], center)
    where = np.where(d > 0.9 * r, "boundary of ball", "well inside")
    wit = [{"point": y.tolist(), "distance": float(dd), "where": str(w)} for y, dd, w in zip(Y[~covered], d, where)]
    inside = int(np.sum(where == "well inside"))
    msg = f"{len(wit)} uncovered sample(s), {inside} well inside the ball"
    return CheckOutcome("covering", FAIL, msg, wit[:10], details)


def local_ball_check(P: Polyhedron, fp: FacePairing, x, delta: float | None = None, samples: int = 200, family=None, d_hat: float | None = None, config: Config = DEFAULT) -> CheckOutcome:
    """The formal-neighbour tiles gP must cover B(x, delta) once, with disjoint interiors."""
    nbrs = formal_neighbours(P, fp, x, family, config)
    if delta is None:
        delta = _step(P, d_hat) / 4.0
    Y = ball_samples(P, nbrs.base_point, delta, samples)
    inside = np.zeros(len(Y), dtype=int)
    touched = np.zeros(len(Y), dtype=bool)
    ambiguous = np.zeros(len(Y), dtype=bool)
    for e in nbrs.entries:
        codes, _ = classify(P, e.g.inverse().apply(Y), config.tol_mem)
        inside += codes == INTERIOR
        touched |= codes != EXTERIOR
        ambiguous |= codes == AMBIGUOUS
    details = {"kind": nbrs.kind, "element": nbrs.element, "neighbours": len(nbrs), "delta": float(delta), "points": int(len(Y))}
    double = np.nonzero(inside >= 2)[0]
    missing = np.nonzero(~touched)[0]
    if len(double) or len(missing):
        wit = [{"point": Y[i].tolist(), "problem": "double cover"} for i in double[:5]]
        wit += [{"point": Y[i].tolist(), "problem": "uncovered"} for i in missing[:5]]
        msg = f"at {nbrs.kind} {nbrs.element}: {len(double)} doubly covered, {len(missing)} uncovered of {len(Y)} samples"
        return CheckOutcome("local_ball", FAIL, msg, wit, details)
    if ambiguous.any():
        return CheckOutcome("local_ball", INCONCLUSIVE, f"ambiguous samples near {nbrs.element}", [], details)
    return CheckOutcome("local_ball", PASS, f"{len(nbrs)} formal neighbours tile B(x, {delta:.3g})", [], details)


def ramification_check(P: Polyhedron, fp: FacePairing, family, samples: int = 200, d_hat: float | None = None, config: Config = DEFAULT) -> CheckOutcome:
    """``local_ball_check`` at one point of every edge and every face of P."""
    from .polyhedron import edge_midpoint, face_center

    points = [edge_midpoint(P, e.id) for e in P.edges] + [face_center(P, f) for f in P.faces]
    results = pmap(lambda x: local_ball_check(P, fp, x, None, samples, family, d_hat, config), points)
    bad = [r for r in results if r.status == FAIL]
    if bad:
        return CheckOutcome("ramification", FAIL, "; ".join(r.message for r in bad), [w for r in bad for w in r.witnesses][:10], {"checked": len(results)})
    if any(r.status == INCONCLUSIVE for r in results):
        return CheckOutcome("ramification", INCONCLUSIVE, "ambiguous samples near the boundary", [], {"checked": len(results)})
    return CheckOutcome("ramification", PASS, f"formal neighbours tile a ball at {len(results)} boundary points", [], {"checked": len(results)})


# ---------------------------------------------------------------------------
# presentation
# ---------------------------------------------------------------------------


@dataclass
class Presentation:
    generators: list[str]
    relations: list[list[tuple[str, int]]]

    @staticmethod
    def _token(letter):
        name, e = letter
        return name if e == 1 else f"{name}^{e}"

    def relation_text(self, rel) -> str:
        return " ".join(self._token(x) for x in rel)

    def to_text(self) -> str:
        lines = ["generators: " + ", ".join(self.generators)]
        lines += [self.relation_text(r) for r in self.relations]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return "⟨" + ", ".join(self.generators) + " | " + ", ".join(self.relation_text(r) for r in self.relations) + "⟩"


def presentation(P: Polyhedron, fp: FacePairing, cycles: list[EdgeCycle]) -> Presentation:
    """One generator per face pair, the cycle relations, and I_s^2 = 1 for self-paired faces."""
    faces = [f.id for f in P.faces]
    gens = fp.generators(faces)
    relations = []
    for s in faces:
        if fp.partner[s] == s:
            name, _ = fp.letter(s)
            relations.append([(name, 1), (name, 1)])
    for c in cycles:
        word = list(reversed(c.faces_applied())) * c.multiplicity
        relations.append([fp.letter(f) for f in word])
    return Presentation(gens, relations)


def invert_relation(rel):
    return [(n, -e) for n, e in reversed(rel)]


def cyclically_equal(r1, r2) -> bool:
    """Equal up to cyclic rotation and inversion."""
    r1, r2 = list(r1), list(r2)
    if len(r1) != len(r2):
        return False
    if not r1:
        return True
    for cand in (r2, invert_relation(r2)):
        for k in range(len(cand)):
            if cand[k:] + cand[:k] == r1:
                return True
    return False


def parse_relation(text: str):
    out = []
    for tok in text.split():
        if "^" in tok:
            name, e = tok.split("^")
            out.append((name, int(e)))
        else:
            out.append((tok, 1))
    return out


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

CHARTS = ("euclidean-plane", "klein-disk", "poincare-disk")
_MAX_TURN = np.deg2rad(1.0)


def _to_chart(P, chart, X):
    if chart == "euclidean-plane":
        return np.asarray(X, dtype=float)
    if chart == "klein-disk":
        return P.space.klein(X)
    return P.space.poincare(X)


def _polyline(P, chart, geo, lo, hi, depth=0):
    """Chart points along ``geo`` on [lo, hi], subdivided until each turn is <= 1 degree."""
    pts = _to_chart(P, chart, geo.point(np.array([lo, 0.5 * (lo + hi), hi])))
    a, m, b = pts
    u, v = m - a, b - m
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    turn = 0.0 if nu < 1e-12 or nv < 1e-12 else np.arccos(np.clip(u @ v / (nu * nv), -1.0, 1.0))
    if depth >= 14 or (turn <= _MAX_TURN and depth >= 2):
        return [a, m, b]
    left = _polyline(P, chart, geo, lo, 0.5 * (lo + hi), depth + 1)
    right = _polyline(P, chart, geo, 0.5 * (lo + hi), hi, depth + 1)
    return left[:-1] + right


def _tile_paths(P, chart, g: Isometry):
    from .polyhedron import _curve_window

    paths = []
    for f in P.faces:
        seg = f.segment.transformed(g)
        lo, hi = _curve_window(P, f.segment)
        paths.append(np.array(_polyline(P, chart, seg, lo, hi)))
    return paths


def _fmt(v: float) -> str:
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


def export_svg(dev: Development, P: Polyhedron, path, chart: str | None = None, size: int = 800) -> str:
    """Write the development as SVG 1.1; returns the document text."""
    if P.dim != 2:
        raise InputError("SVG export supports planar models only")
    if chart is None:
        chart = "poincare-disk" if P.space.hyperbolic else "euclidean-plane"
    if chart not in CHARTS:
        raise InputError(f"unknown chart {chart!r}; expected one of {CHARTS}")
    if P.space.hyperbolic == (chart == "euclidean-plane"):
        raise InputError(f"chart {chart} does not match {P.space}")
    tiles = [(t, _tile_paths(P, chart, t.g)) for t in dev.translates]
    if chart == "euclidean-plane":
        allpts = np.concatenate([p for _, paths in tiles for p in paths])
        lo, hi = allpts.min(axis=0), allpts.max(axis=0)
        pad = 0.05 * max(hi - lo) + 1e-9
        lo, hi = lo - pad, hi + pad
    else:
        lo, hi = np.array([-1.02, -1.02]), np.array([1.02, 1.02])
    scale = size / max(hi - lo)
    width, height = (hi - lo) * scale

    def xy(p):
        return _fmt((p[0] - lo[0]) * scale), _fmt((hi[1] - p[1]) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]
    if chart != "euclidean-plane":
        cx, cy = xy((0.0, 0.0))
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{_fmt(scale)}" fill="none" stroke="#888888" stroke-width="1"/>')
    for t, paths in reversed(tiles):
        ident = not t.word
        stroke, sw = ("#c0392b", "2.5") if ident else ("#1f3b73", "1")
        if P.bounded:
            ring = np.concatenate([p[:-1] for p in paths])
            d = "M " + " L ".join(" ".join(xy(p)) for p in ring) + " Z"
            fill = "#f5cba7" if ident else "none"
            out.append(f'<path d="{d}" fill="{fill}" stroke="{stroke}" stroke-width="{sw}"/>')
        else:
            for p in paths:
                pts = " ".join(",".join(xy(q)) for q in p)
                out.append(f'<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="{sw}"/>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
