"""Cornerless polyhedra: faces, edges, membership and separation estimates.

Two constructions are supported:

* ``PolygonSpec`` -- an ordered vertex list in E^2 or H^2 (convex or not).
  Side ``i`` runs from vertex ``i`` to vertex ``i+1``; vertex ``i`` is the
  edge shared by sides ``i-1`` and ``i``.
* ``HalfspaceSpec`` -- a convex intersection of half-spaces ``{h >= 0}`` in
  any of E^2, E^3, H^2, H^3.  Faces and edges may be unbounded; in
  dimension 3 an edge with an endpoint would be a corner and is rejected.

Everything numeric here is tolerance based: ``locate`` compares signed
distances against ``tol_mem`` and ``estimate_separation`` reports a sampled
estimate, not a certified bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.stats import qmc

from .config import DEFAULT, Config
from .errors import GeometryError, StructuralError
from .geometry import Geodesic, Hyperplane, ModelSpace, Tangent, golden_section

POLYGON = "polygon"
HALFSPACES = "halfspaces"

INTERIOR, FACE, EDGE, EXTERIOR, AMBIGUOUS = range(5)
_KIND_NAMES = {INTERIOR: "interior", FACE: "boundary", EDGE: "boundary", EXTERIOR: "exterior", AMBIGUOUS: "inconclusive"}


@dataclass(frozen=True)
class PolygonSpec:
    vertices: Sequence
    face_ids: Sequence[str] | None = None
    edge_ids: Sequence[str] | None = None
    interior_witness: Sequence[float] | None = None


@dataclass(frozen=True)
class HalfspaceSpec:
    # (face id, hyperplane); the polyhedron side is where the hyperplane value is >= 0.
    halfspaces: Sequence[tuple[str, Hyperplane]]
    # optional declared incidence: (edge id, (face id, face id))
    edges: Sequence[tuple[str, tuple[str, str]]] | None = None
    interior_witness: Sequence[float] | None = None


@dataclass(frozen=True, eq=False)
class Face:
    id: str
    carrier: Hyperplane
    interior_sign: int
    bounds: tuple[Hyperplane, ...]
    edge_ids: tuple[str, ...]
    segment: Geodesic | None = None

    def value(self, x):
        """Signed distance to the carrier, positive on the interior side."""
        return self.interior_sign * self.carrier.value(x)

    def bound_margin(self, x):
        x = np.asarray(x, dtype=float)
        if not self.bounds:
            return np.full(x.shape[:-1], np.inf)
        return np.min([b.value(x) for b in self.bounds], axis=0)

    def in_bounds(self, x, tol):
        return self.bound_margin(x) >= -tol

    def normal(self, x):
        return self.interior_sign * self.carrier.gradient(x)


@dataclass(frozen=True, eq=False)
class Edge:
    id: str
    incident_faces: tuple[str, str]
    point: np.ndarray | None = None
    line: Geodesic | None = None

    def distance(self, space, x):
        if self.point is not None:
            return space.distance(x, self.point)
        return self.line.distance(x)


@dataclass(frozen=True)
class Location:
    kind: str  # interior | boundary | exterior | inconclusive
    element: str | None = None
    element_kind: str | None = None  # face | edge

    def __str__(self):
        if self.kind == "boundary":
            return f"boundary({self.element_kind} {self.element})"
        return self.kind


@dataclass(frozen=True, eq=False)
class Polyhedron:
    space: ModelSpace
    faces: tuple[Face, ...]
    edges: tuple[Edge, ...]
    interior_witness: np.ndarray
    construction: str
    vertices: np.ndarray | None = None
    window: float = 6.0
    tol: float = 1e-9
    _cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def _faces_by_id(self):
        return {f.id: f for f in self.faces}

    @cached_property
    def _edges_by_id(self):
        return {e.id: e for e in self.edges}

    @cached_property
    def face_order(self):
        return {f.id: i for i, f in enumerate(self.faces)}

    @cached_property
    def edge_order(self):
        return {e.id: i for i, e in enumerate(self.edges)}

    def face(self, fid: str) -> Face:
        try:
            return self._faces_by_id[fid]
        except KeyError:
            raise StructuralError(f"unknown face {fid!r}", kind="incidence") from None

    def edge(self, eid: str) -> Edge:
        try:
            return self._edges_by_id[eid]
        except KeyError:
            raise StructuralError(f"unknown edge {eid!r}", kind="incidence") from None

    def shared_edges(self, a: str, b: str) -> list[str]:
        return [e for e in self.face(a).edge_ids if e in self.face(b).edge_ids]

    @property
    def dim(self):
        return self.space.dim

    @property
    def bounded(self) -> bool:
        return self.construction == POLYGON

    def __repr__(self):
        return f"Polyhedron({self.space}, {len(self.faces)} faces, {len(self.edges)} edges, {self.construction})"


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def build(space: ModelSpace, construction, config: Config = DEFAULT) -> Polyhedron:
    if isinstance(construction, PolygonSpec):
        return _build_polygon(space, construction, config)
    if isinstance(construction, HalfspaceSpec):
        return _build_halfspaces(space, construction, config)
    raise TypeError(f"unsupported construction {type(construction).__name__}")


def _segments_cross(a, b, c, d) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    return (o1 * o2 < 0) and (o3 * o4 < 0)


def _build_polygon(space, spec: PolygonSpec, config) -> Polyhedron:
    if space.dim != 2:
        raise StructuralError("polygon construction needs a planar model", kind="input")
    verts = np.array([space.point(v) for v in spec.vertices])
    m = len(verts)
    if m < 3:
        raise StructuralError("a polygon needs at least 3 vertices", kind="empty_interior")
    face_ids = list(spec.face_ids) if spec.face_ids else [f"s{i}" for i in range(m)]
    edge_ids = list(spec.edge_ids) if spec.edge_ids else [f"v{i}" for i in range(m)]
    if len(face_ids) != m or len(edge_ids) != m:
        raise StructuralError("face_ids / edge_ids must have one entry per vertex", kind="input")
    if len(set(face_ids)) != m or len(set(edge_ids)) != m:
        raise StructuralError("face and edge ids must be unique", kind="input")
    for i in range(m):
        if space.distance(verts[i], verts[(i + 1) % m]) <= config.tol_mem:
            raise StructuralError(f"consecutive vertices {i} and {(i + 1) % m} coincide", kind="degenerate", witness=i)

    chart = space.klein(verts)
    x, y = chart[:, 0], chart[:, 1]
    area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    if abs(area) <= 1e-14:
        raise StructuralError("polygon has empty interior", kind="empty_interior")
    sign = 1 if area > 0 else -1

    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if _segments_cross(chart[i], chart[(i + 1) % m], chart[j], chart[(j + 1) % m]):
                raise StructuralError(f"sides {face_ids[i]} and {face_ids[j]} cross", kind="self_intersection", witness=(face_ids[i], face_ids[j]))

    faces = []
    for i in range(m):
        p, q = verts[i], verts[(i + 1) % m]
        seg = Geodesic.between(space, p, q)
        carrier = Hyperplane.through(space, [p, q])
        left = space.rotate90(p, seg.direction)
        if space.inner(carrier.gradient(p), left) < 0:
            carrier = carrier.flipped()
        end_dir = seg.velocity(seg.hi)
        if space.hyperbolic:
            bounds = (Hyperplane(space, seg.direction), Hyperplane(space, -end_dir))
        else:
            bounds = (Hyperplane(space, seg.direction, seg.direction @ p), Hyperplane(space, -end_dir, -end_dir @ q))
        faces.append(Face(face_ids[i], carrier, sign, bounds, (edge_ids[i], edge_ids[(i + 1) % m]), seg))
    edges = [Edge(edge_ids[i], (face_ids[i - 1], face_ids[i]), point=verts[i]) for i in range(m)]

    P = Polyhedron(space, tuple(faces), tuple(edges), space.origin(), POLYGON, verts, config.window, config.tol_mem)
    witness = _polygon_witness(P, spec.interior_witness, config)
    object.__setattr__(P, "interior_witness", witness)
    return P


def _polygon_witness(P, given, config):
    space = P.space
    if given is not None:
        w = space.point(given)
        if locate(P, w).kind != "interior":
            raise StructuralError("declared interior witness is not interior", kind="empty_interior", witness=w.tolist())
        return w
    candidates = [space.from_klein(space.klein(P.vertices).mean(axis=0))]
    lengths = [f.segment.length for f in P.faces]
    for h in (0.1, 0.01, 0.001):
        for f in P.faces:
            mid = f.segment.point(0.5 * f.segment.length)
            candidates.append(space.geodesic_point(mid, f.normal(mid), h * min(lengths)))
    for c in candidates:
        if locate(P, c).kind == "interior":
            return c
    raise StructuralError("could not find an interior point", kind="empty_interior")


def _chart_rows(space, hyperplane):
    """Halfspace as ``a . k + b`` in the Klein (or Euclidean) chart, up to a positive factor."""
    u = hyperplane.normal
    if space.hyperbolic:
        return u[1:], -u[0]
    return u, -hyperplane.offset


def _ball_rows(space, radius):
    if space.dim == 2:
        ang = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        dirs = np.column_stack([np.cos(ang), np.sin(ang)])
    else:
        n = 200
        i = np.arange(n) + 0.5
        phi = np.arccos(1 - 2 * i / n)
        theta = np.pi * (1 + 5**0.5) * i
        dirs = np.column_stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)])
    return dirs, np.full(len(dirs), radius)


def _chebyshev(space, halfspaces, equalities=()):
    """Centred point with positive slack in every half-space (Klein chart LP).

    Returns ``(slack, point)``; slack <= 0 means no interior.
    """
    n = space.dim
    a_ub, b_ub = [], []
    for h in halfspaces:
        a, b = _chart_rows(space, h)
        na = np.linalg.norm(a)
        if na == 0:
            if b < 0:
                return -1.0, None
            continue
        # a.k + b >= r |a|  ->  -a.k + |a| r <= b
        a_ub.append(np.concatenate([-a, [na]]))
        b_ub.append(b)
    dirs, rad = _ball_rows(space, 1.0 - 1e-3 if space.hyperbolic else 1e3)
    for d, r in zip(dirs, rad):
        a_ub.append(np.concatenate([d, [0.0]]))
        b_ub.append(r)
    a_eq, b_eq = [], []
    for h in equalities:
        a, b = _chart_rows(space, h)
        a_eq.append(np.concatenate([a, [0.0]]))
        b_eq.append(-b)
    bounds = [(None, None)] * n + [(None, 1.0)]
    c = np.zeros(n + 1)
    c[-1] = -1.0
    kw = dict(A_ub=np.array(a_ub), b_ub=np.array(b_ub), bounds=bounds, method="highs")
    if a_eq:
        kw.update(A_eq=np.array(a_eq), b_eq=np.array(b_eq))
    res = linprog(c, **kw)
    if not res.success:
        return -1.0, None
    slack = float(res.x[-1])
    if slack <= 1e-12:
        return slack, None
    # second pass: the most central point (min |k|_1) keeping half the slack
    nv = 2 * n + 1
    a2, b2 = [], []
    for row, b in zip(a_ub, b_ub):
        a2.append(np.concatenate([row[:n], np.zeros(n), [row[n]]]))
        b2.append(b)
    for i in range(n):
        for s in (1.0, -1.0):
            r = np.zeros(nv)
            r[i] = s
            r[n + i] = -1.0
            a2.append(r)
            b2.append(0.0)
    c2 = np.concatenate([np.zeros(n), np.ones(n), [0.0]])
    bounds2 = [(None, None)] * n + [(0, None)] * n + [(slack / 2, slack / 2)]
    kw2 = dict(A_ub=np.array(a2), b_ub=np.array(b2), bounds=bounds2, method="highs")
    if a_eq:
        kw2.update(A_eq=np.array([np.concatenate([r[:n], np.zeros(n), [0.0]]) for r in a_eq]), b_eq=np.array(b_eq))
    res2 = linprog(c2, **kw2)
    k = res2.x[:n] if res2.success else res.x[:n]
    return slack, space.from_klein(k)


def _interval(geo: Geodesic, h: Hyperplane):
    """Parameters ``t`` with ``h(geo(t)) >= 0`` as ``(lo, hi)``, or None if empty."""
    space = geo.space
    if space.hyperbolic:
        a = float(space.inner(geo.base, h.normal))
        b = float(space.inner(geo.direction, h.normal))
        # a cosh t + b sinh t >= 0  <=>  (a+b) e^{2t} >= (b-a)
        p, q = a + b, b - a
        if abs(p) <= 1e-15:
            return (-np.inf, np.inf) if a - b >= 0 else None
        if p > 0:
            return (-np.inf, np.inf) if q <= 0 else (0.5 * np.log(q / p), np.inf)
        if q >= 0:
            return None
        return (-np.inf, 0.5 * np.log(q / p))
    a = float(h.value(geo.base))
    b = float(h.normal @ geo.direction)
    if abs(b) <= 1e-15:
        return (-np.inf, np.inf) if a >= 0 else None
    t0 = -a / b
    return (t0, np.inf) if b > 0 else (-np.inf, t0)


def _restrict(geo: Geodesic, constraints) -> Geodesic | None:
    lo, hi = geo.lo, geo.hi
    for h in constraints:
        iv = _interval(geo, h)
        if iv is None:
            return None
        lo, hi = max(lo, iv[0]), min(hi, iv[1])
        if hi < lo:
            return None
    return Geodesic(geo.space, geo.base, geo.direction, lo, hi)


def _carrier_line(space, h: Hyperplane, near) -> Geodesic:
    base = h.project(near)
    (d,) = space.tangent_basis(base, [h.gradient(base)])
    return Geodesic(space, base, d)


def _meet(space, h1: Hyperplane, h2: Hyperplane, near):
    """Intersection of two carriers: a point (dim 2), a complete line (dim 3), or None."""
    if space.hyperbolic:
        m = np.array([h1.normal, h2.normal]) @ space.eta
        _, s, vt = np.linalg.svd(m)
        if s[-1] < 1e-12 * s[0]:
            return None
        null = vt[2:]
        if space.dim == 2:
            p = null[0]
            if space.inner(p, p) >= -1e-14:
                return None
            return space.normalize(p if p[0] > 0 else -p)
        gram = null @ space.eta @ null.T
        w, vecs = np.linalg.eigh(gram)
        if w[0] >= -1e-14:
            return None
        p = null.T @ vecs[:, 0]
        p = space.normalize(p if p[0] > 0 else -p)
        d = null.T @ vecs[:, 1]
        d = d - space.inner(d, p) * -p  # already orthogonal; keep exact tangency
        line = Geodesic(space, p, space.project_tangent(p, d))
        return Geodesic(space, line.point(line.foot(near, clamp=False)), line.velocity(line.foot(near, clamp=False)))
    a = np.array([h1.normal, h2.normal])
    c = np.array([h1.offset, h2.offset])
    if space.dim == 2:
        if abs(np.linalg.det(a)) < 1e-12:
            return None
        return np.linalg.solve(a, c)
    w = np.cross(a[0], a[1])
    if np.linalg.norm(w) < 1e-12:
        return None
    p = np.linalg.lstsq(a, c, rcond=None)[0]
    line = Geodesic(space, p, w)
    return Geodesic(space, line.point(line.foot(near, clamp=False)), w)


def _build_halfspaces(space, spec: HalfspaceSpec, config) -> Polyhedron:
    ids = [fid for fid, _ in spec.halfspaces]
    hs = [h for _, h in spec.halfspaces]
    if len(set(ids)) != len(ids):
        raise StructuralError("face ids must be unique", kind="input")
    if not hs:
        raise StructuralError("no half-spaces given", kind="input")
    tol = config.tol_mem
    if spec.interior_witness is not None:
        witness = space.point(spec.interior_witness)
        if min(h.value(witness) for h in hs) <= tol:
            raise StructuralError("declared interior witness is not interior", kind="empty_interior", witness=witness.tolist())
    else:
        slack, witness = _chebyshev(space, hs)
        if witness is None:
            raise StructuralError("half-space intersection has empty interior", kind="empty_interior")

    m = len(hs)
    segments: list[Geodesic | None] = [None] * m
    for i in range(m):
        others = [hs[j] for j in range(m) if j != i]
        if space.dim == 2:
            seg = _restrict(_carrier_line(space, hs[i], witness), others)
            if seg is None or seg.length <= tol:
                raise StructuralError(f"half-space {ids[i]} does not contribute a face", kind="empty_face", witness=ids[i])
            segments[i] = seg
        else:
            slack, _ = _chebyshev(space, others, equalities=[hs[i]])
            if slack <= 1e-9:
                raise StructuralError(f"half-space {ids[i]} does not contribute a face", kind="empty_face", witness=ids[i])

    found: dict[tuple[int, int], np.ndarray | Geodesic] = {}
    for i in range(m):
        for j in range(i + 1, m):
            locus = _meet(space, hs[i], hs[j], witness)
            if locus is None:
                continue
            others = [hs[k] for k in range(m) if k not in (i, j)]
            if space.dim == 2:
                vals = [h.value(locus) for h in others]
                if vals and min(vals) < -tol:
                    continue
                if vals and min(abs(v) for v in vals) <= tol:
                    raise StructuralError(f"three face carriers meet at {locus}", kind="edge_incidence", witness=locus.tolist())
                found[(i, j)] = locus
            else:
                line = _restrict(locus, others)
                if line is None:
                    continue
                if np.isfinite(line.lo) or np.isfinite(line.hi):
                    end = line.point(line.lo if np.isfinite(line.lo) else line.hi)
                    raise StructuralError(f"faces {ids[i]} and {ids[j]} meet in an edge with an endpoint (corner)", kind="cornered", witness=end.tolist())
                found[(i, j)] = line

    declared = {}
    if spec.edges is not None:
        for eid, (a, b) in spec.edges:
            if a not in ids or b not in ids:
                raise StructuralError(f"edge {eid} refers to unknown faces", kind="incidence", witness=eid)
            if a == b:
                raise StructuralError(f"edge {eid} must join two distinct faces", kind="edge_incidence", witness=eid)
            key = tuple(sorted((ids.index(a), ids.index(b))))
            declared[key] = (eid, (a, b))
        if set(declared) != set(found):
            missing = sorted(set(found) - set(declared))
            extra = sorted(set(declared) - set(found))
            raise StructuralError(f"declared incidence disagrees with geometry (undeclared {missing}, spurious {extra})", kind="incidence")

    edges = []
    for (i, j), locus in sorted(found.items()):
        eid, faces = declared.get((i, j), (f"{ids[i]}|{ids[j]}", (ids[i], ids[j])))
        if space.dim == 2:
            edges.append(Edge(eid, faces, point=locus))
        else:
            edges.append(Edge(eid, faces, line=locus))

    faces = []
    for i in range(m):
        eids = tuple(e.id for e in edges if ids[i] in e.incident_faces)
        bounds = tuple(hs[j] for j in range(m) if j != i)
        faces.append(Face(ids[i], hs[i], 1, bounds, eids, segments[i]))
    return Polyhedron(space, tuple(faces), tuple(edges), witness, HALFSPACES, None, config.window, tol)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def classify(P: Polyhedron, X, tol: float | None = None):
    """Vectorised ``locate``: returns ``(codes, element_index)`` arrays.

    ``element_index`` is a face index for FACE, an edge index for EDGE and -1
    otherwise.
    """
    tol = P.tol if tol is None else tol
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = len(X)
    codes = np.full(n, EXTERIOR)
    elem = np.full(n, -1)
    vals = np.array([f.value(X) for f in P.faces])  # (m, n)

    if P.construction == HALFSPACES:
        on = np.abs(vals) <= tol
        outside = (vals < -tol).any(axis=0)
        cnt = on.sum(axis=0)
        codes[:] = np.where(outside, EXTERIOR, np.where(cnt == 0, INTERIOR, AMBIGUOUS))
        one = ~outside & (cnt == 1)
        codes[one] = FACE
        elem[one] = np.argmax(on[:, one], axis=0)
        two = np.where(~outside & (cnt == 2))[0]
        pair_to_edge = P._cache.setdefault(
            "pair_edge", {tuple(sorted(P.face_order[f] for f in e.incident_faces)): k for k, e in enumerate(P.edges)}
        )
        for idx in two:
            pair = tuple(np.nonzero(on[:, idx])[0])
            k = pair_to_edge.get(pair)
            if k is not None:
                codes[idx], elem[idx] = EDGE, k
        return codes, elem

    # polygon: boundary via signed distances, interior via crossing number in the chart
    margins = np.array([f.bound_margin(X) for f in P.faces])
    on = (np.abs(vals) <= tol) & (margins >= -tol)
    cnt = on.sum(axis=0)
    chart = P.space.klein(X)
    poly = P.space.klein(P.vertices)
    inside = np.zeros(n, dtype=bool)
    px, py = chart[:, 0], chart[:, 1]
    for i in range(len(poly)):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % len(poly)]
        straddle = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= straddle & (px < xint)
    codes[:] = np.where(inside, INTERIOR, EXTERIOR)
    codes[cnt == 1] = FACE
    elem[cnt == 1] = np.argmax(on[:, cnt == 1], axis=0)
    codes[cnt >= 2] = AMBIGUOUS
    vdist = np.array([P.space.distance(X, e.point) for e in P.edges])
    at_vertex = vdist.min(axis=0) <= tol
    codes[at_vertex] = EDGE
    elem[at_vertex] = np.argmin(vdist[:, at_vertex], axis=0)
    return codes, elem


def locate(P: Polyhedron, x, tol: float | None = None) -> Location:
    codes, elem = classify(P, np.asarray(x, dtype=float)[None, :], tol)
    c, k = int(codes[0]), int(elem[0])
    if c == FACE:
        return Location("boundary", P.faces[k].id, "face")
    if c == EDGE:
        return Location("boundary", P.edges[k].id, "edge")
    return Location(_KIND_NAMES[c])


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def van_der_corput(n: int, base: int = 2) -> np.ndarray:
    """First ``n`` terms (starting at index 1) of the base-``base`` radical inverse."""
    return qmc.Halton(d=1, scramble=False).random(n + 1)[1:, 0] if base == 2 else _radical_inverse(n, base)


def _radical_inverse(n, base):
    out = np.zeros(n)
    for i in range(n):
        k, f, r = i + 1, 1.0, 0.0
        while k:
            f /= base
            r += f * (k % base)
            k //= base
        out[i] = r
    return out


def _halton(d: int, n: int) -> np.ndarray:
    return qmc.Halton(d=d, scramble=False).random(n + 1)[1:]


def _curve_window(P: Polyhedron, geo: Geodesic) -> tuple[float, float]:
    if geo.bounded:
        return geo.lo, geo.hi
    return geo.window(float(geo.foot(P.interior_witness)), P.window)


def _curve_params(P, geo, k, closed=False):
    lo, hi = _curve_window(P, geo)
    if closed:
        if k == 1:
            return np.array([(lo + hi) / 2])
        return np.linspace(lo, hi, k)
    return lo + (hi - lo) * (np.arange(k) + 0.5) / k


def face_center(P: Polyhedron, face: Face):
    """Point of the face nearest the interior witness (window centre for sampling)."""
    w = P.interior_witness
    if face.segment is not None:
        return face.segment.point(face.segment.foot(w))
    q = face.carrier.project(w)
    if face.in_bounds(q, P.tol):
        return q
    best = None
    for eid in face.edge_ids:
        line = P.edge(eid).line
        p = line.point(line.foot(w))
        d = float(P.space.distance(p, w))
        if best is None or d < best[0]:
            best = (d, p)
    if best is None:
        raise GeometryError(f"cannot centre face {face.id}")
    return best[1]


def _region_frame(P, face):
    key = ("frame", face.id)
    if key not in P._cache:
        c = face_center(P, face)
        basis = P.space.tangent_basis(c, [face.carrier.gradient(c)])
        P._cache[key] = (c, basis)
    return P._cache[key]


def _region_points(P, face, uv):
    c, basis = _region_frame(P, face)
    return P.space.exp(c, uv @ basis)


def sample_face(P: Polyhedron, face_id: str, k: int) -> np.ndarray:
    """``k`` quasi-uniform points on a face (windowed when unbounded)."""
    face = P.face(face_id)
    if face.segment is not None:
        return face.segment.point(_curve_params(P, face.segment, k))
    out = []
    n = 8 * k
    while len(out) < k and n <= 4096 * max(k, 1):
        uv = (_halton(2, n) - 0.5) * P.window
        pts = _region_points(P, face, uv)
        # relative interior only: grid points can land exactly on an edge
        out = pts[face.bound_margin(pts) > P.tol]
        n *= 4
    return np.asarray(out[:k])


def sample_edge(P: Polyhedron, edge_id: str, k: int) -> np.ndarray:
    edge = P.edge(edge_id)
    if edge.point is not None:
        return np.repeat(edge.point[None, :], k, axis=0)
    return edge.line.point(_curve_params(P, edge.line, k))


def edge_midpoint(P: Polyhedron, edge_id: str) -> np.ndarray:
    edge = P.edge(edge_id)
    if edge.point is not None:
        return np.array(edge.point)
    lo, hi = _curve_window(P, edge.line)
    return edge.line.point(0.5 * (lo + hi))


def interior_normal(P: Polyhedron, face_id: str, x, probe: float = 1e-4) -> Tangent:
    """Unit normal at ``x`` pointing into P, confirmed by a short geodesic probe."""
    face = P.face(face_id)
    x = np.asarray(x, dtype=float)
    n = face.normal(x)
    y = P.space.geodesic_point(x, n, probe)
    if locate(P, y).kind != "interior":
        raise GeometryError(f"interior normal of face {face_id} does not point inside at {x}", witness=x.tolist())
    return Tangent(P.space, x, n)


def sample_interior(P: Polyhedron, k: int, near_faces: float | None = None) -> np.ndarray:
    """Deterministic interior samples; optionally add points ``near_faces`` inside each face."""
    space = P.space
    pts = []
    if P.bounded:
        chart = space.klein(P.vertices)
        lo, hi = chart.min(axis=0), chart.max(axis=0)
        n = 4 * k
        while True:
            kc = lo + (hi - lo) * _halton(2, n)
            if space.hyperbolic:
                kc = kc[(kc * kc).sum(axis=1) < 1.0 - 1e-12]
            cand = space.from_klein(kc)
            codes, _ = classify(P, cand)
            pts = cand[codes == INTERIOR][:k]
            if len(pts) >= k or n > 256 * k:
                break
            n *= 4
    else:
        w = P.interior_witness
        basis = space.tangent_basis(w)
        if space.hyperbolic:
            basis = space.tangent_basis(w, [])
        n = 4 * k
        while True:
            z = 2 * _halton(space.dim, n) - 1
            z = z[(z * z).sum(axis=1) <= 1]
            cand = space.exp(w, (P.window / 2) * z @ basis)
            codes, _ = classify(P, cand)
            pts = cand[codes == INTERIOR][:k]
            if len(pts) >= k or n > 256 * k:
                break
            n *= 4
    pts = [np.asarray(pts)]
    if near_faces:
        per = max(2, k // max(1, len(P.faces)))
        for f in P.faces:
            fp = sample_face(P, f.id, per)
            if len(fp):
                shifted = space.exp(fp, near_faces * f.normal(fp)) if space.hyperbolic else fp + near_faces * f.normal(fp)
                codes, _ = classify(P, shifted)
                pts.append(shifted[codes == INTERIOR])
    return np.concatenate([p for p in pts if len(p)]) if any(len(p) for p in pts) else np.zeros((0, space.ambient))


# ---------------------------------------------------------------------------
# distances between loci and the separation estimate
# ---------------------------------------------------------------------------


def face_distance(P: Polyhedron, face: Face, X):
    """Distance from points to a (closed, convex-in-carrier) face."""
    X = np.asarray(X, dtype=float)
    if face.segment is not None:
        return face.segment.distance(X)
    q = face.carrier.project(X)
    perp = np.abs(face.carrier.value(X))
    inside = face.in_bounds(q, P.tol)
    if np.all(inside):
        return perp
    if face.edge_ids:
        via_edges = np.min([P.edge(e).line.distance(X) for e in face.edge_ids], axis=0)
    else:
        via_edges = np.full(perp.shape, np.inf)
    # cosh d = cosh(perp) cosh(in-plane) in H^n, so the nearest face point is the
    # in-plane nearest point to the foot; the edge line realises it.
    return np.where(inside, perp, via_edges)


class _Locus:
    """Sampled parametrisation of a face or edge, for distance minimisation."""

    def __init__(self, P: Polyhedron, kind: str, ident: str):
        self.P, self.kind, self.id = P, kind, ident
        if kind == "edge":
            e = P.edge(ident)
            self.curve = e.line
            self.point0 = e.point
            self.region = None
        else:
            f = P.face(ident)
            self.curve = f.segment
            self.point0 = None
            self.region = f if f.segment is None else None

    def label(self):
        return f"{self.kind} {self.id}"

    def distance(self, X):
        if self.kind == "edge":
            return self.P.edge(self.id).distance(self.P.space, X)
        return face_distance(self.P, self.P.face(self.id), X)

    def minimise(self, other: "_Locus", k: int) -> tuple[float, np.ndarray]:
        """Min over this locus of the distance to ``other``; sample then golden-refine."""
        P = self.P
        if self.point0 is not None:
            return float(other.distance(self.point0[None, :])[0]), self.point0
        if self.curve is not None:
            lo, hi = _curve_window(P, self.curve)
            if hi - lo <= 0:
                t = np.array([lo])
            else:
                t = lo + (hi - lo) * np.concatenate([[0.0, 1.0], van_der_corput(max(k - 2, 1))])
            d = other.distance(self.curve.point(t))
            i = int(np.argmin(d))
            best_t, best_d = float(t[i]), float(d[i])
            if hi > lo:
                tt, dd = golden_section(lambda s: float(other.distance(self.curve.point(np.array([s])))[0]), lo, hi, tol=1e-13)
                if dd < best_d:
                    best_t, best_d = tt, dd
            return best_d, self.curve.point(best_t)
        face = self.region
        uv = (_halton(2, max(8 * k, 16)) - 0.5) * P.window
        pts = _region_points(P, face, uv)
        ok = face.in_bounds(pts, P.tol)
        uv, pts = uv[ok], pts[ok]
        if not len(pts):
            return np.inf, None
        d = other.distance(pts)
        i = int(np.argmin(d))
        best_uv, best_d = uv[i].copy(), float(d[i])
        step = P.window / np.sqrt(len(uv)) * 2

        def f(u):
            p = _region_points(P, face, u[None, :])
            if not face.in_bounds(p, P.tol)[0]:
                return np.inf
            return float(other.distance(p)[0])

        for _ in range(4):
            for axis in range(2):
                def g(s, axis=axis):
                    u = best_uv.copy()
                    u[axis] = s
                    return f(u)

                s, val = golden_section(g, best_uv[axis] - step, best_uv[axis] + step, tol=1e-12)
                if val < best_d:
                    best_uv[axis], best_d = s, val
            step /= 2
        return best_d, _region_points(P, face, best_uv[None, :])[0]


@dataclass
class Separation:
    d_hat: float
    witness: tuple[str, str] | None
    categories: dict[str, float]
    violations: list[dict]
    estimated: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations


def separation_pairs(P: Polyhedron):
    """The three Strong Simplicity categories of distinct, non-incident element pairs."""
    edges = [e.id for e in P.edges]
    faces = [f.id for f in P.faces]
    pairs = []
    for i, a in enumerate(edges):
        for b in edges[i + 1:]:
            pairs.append(("edge-edge", ("edge", a), ("edge", b)))
    for i, a in enumerate(faces):
        for b in faces[i + 1:]:
            if not P.shared_edges(a, b):
                pairs.append(("face-face", ("face", a), ("face", b)))
    for f in faces:
        for e in edges:
            if e not in P.face(f).edge_ids:
                pairs.append(("face-edge", ("edge", e), ("face", f)))
    return pairs


def _at_infinity(P: Polyhedron, xi, faces, tol) -> bool:
    """Whether the ideal point ``xi`` lies in the closure of P and of the given faces."""
    space = P.space
    for f in P.faces:
        if f.interior_sign * space.inner(xi, f.carrier.normal) < -tol:
            return False
    return all(space.inner(xi, b.normal) >= -tol for f in faces for b in f.bounds)


def _ideal_contacts(P: Polyhedron, pairs, tol: float):
    """Pairs of hyperbolic elements that share an ideal point, so their distance has infimum 0.

    Window sampling cannot see this: the distance decays like ``exp(-t)``.
    """
    space = P.space
    if not space.hyperbolic:
        return []
    out = []
    for cat, (ka, a), (kb, b) in pairs:
        if cat == "face-face":
            fa, fb = P.face(a), P.face(b)
            ua, ub = fa.carrier.normal, fb.carrier.normal
            c = float(space.inner(ua, ub))
            if abs(abs(c) - 1.0) > tol:
                continue
            xi = ua - np.sign(c) * ub
            if np.abs(xi).max() <= tol:
                continue  # coincident carriers are caught by sampling
            xi = xi / xi[0] if abs(xi[0]) > tol else None
            if xi is not None and _at_infinity(P, xi, (fa, fb), tol):
                out.append((cat, f"face {a}", f"face {b}", xi))
        elif cat == "face-edge":
            line = P.edge(a).line
            if line is None:
                continue
            f = P.face(b)
            for end, sign in ((line.hi, 1.0), (line.lo, -1.0)):
                if np.isfinite(end):
                    continue
                xi = line.base + sign * line.direction
                xi = xi / xi[0]
                if abs(space.inner(xi, f.carrier.normal)) <= tol and _at_infinity(P, xi, (f,), tol):
                    out.append((cat, f"edge {a}", f"face {b}", xi))
                    break
    return out


def estimate_separation(P: Polyhedron, samples: int = 32, config: Config = DEFAULT) -> Separation:
    """Estimate the Strong Simplicity constant d by sampled minimisation.

    Returns the minimum over all category pairs plus any violations: pairs
    closer than ``tol_mem`` and adjacent faces meeting away from their shared
    edges.
    """
    from .config import pmap

    tol = config.tol_mem
    pairs = separation_pairs(P)

    def run(item):
        cat, (ka, a), (kb, b) = item
        la, lb = _Locus(P, ka, a), _Locus(P, kb, b)
        d, where = la.minimise(lb, samples)
        return cat, la.label(), lb.label(), d, where

    results = pmap(run, pairs)
    cats: dict[str, float] = {}
    best, witness, violations = np.inf, None, []
    for cat, la, lb, d, where in results:
        cats[cat] = min(cats.get(cat, np.inf), d)
        if d < best:
            best, witness = d, (la, lb)
        if d <= tol:
            violations.append({"kind": cat, "pair": [la, lb], "distance": d, "point": None if where is None else np.asarray(where).tolist()})

    for cat, la, lb, xi in _ideal_contacts(P, pairs, config.tol_iso):
        cats[cat] = 0.0
        best, witness = 0.0, (la, lb)
        violations.append({"kind": cat, "pair": [la, lb], "distance": 0.0, "point": None, "ideal_point": xi.tolist()})

    # faces sharing edges must meet only along those edges
    eta = best / 2 if np.isfinite(best) else 1.0
    for i, fa in enumerate(P.faces):
        for fb in P.faces[i + 1:]:
            shared = P.shared_edges(fa.id, fb.id)
            if not shared:
                continue
            pts = sample_face(P, fa.id, max(samples, 8))
            if not len(pts):
                continue
            far = np.min([P.edge(e).distance(P.space, pts) for e in shared], axis=0) > eta
            if not far.any():
                continue
            d = face_distance(P, fb, pts[far])
            j = int(np.argmin(d))
            if d[j] <= tol:
                violations.append({"kind": "face-intersection", "pair": [f"face {fa.id}", f"face {fb.id}"], "distance": float(d[j]), "point": pts[far][j].tolist()})

    return Separation(float(best), witness, {k: float(v) for k, v in sorted(cats.items())}, violations)
