"""Interior angles and the three hypotheses of the polyhedron theorem.

Every check returns a ``CheckResult`` with a status (pass / fail /
inconclusive / skipped), a numeric margin and, on failure, a witness.
``verify_all`` aggregates them; a failing component makes the verdict fail
even if another is inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Config, pmap
from .errors import CycleError, GeometryError, PairingError, TessellaError
from .geometry import Tangent, oriented_angle
from .pairing import EdgeCycle, FacePairing, cycle_family, cycle_residual, validate_pairing
from .polyhedron import (
    Polyhedron,
    edge_midpoint,
    estimate_separation,
    face_center,
    face_distance,
    interior_normal,
    sample_edge,
    sample_face,
)

TWO_PI = 2.0 * np.pi
PASS, FAIL, INCONCLUSIVE, SKIPPED = "pass", "fail", "inconclusive", "skipped"


@dataclass(frozen=True, eq=False)
class AngleTerm:
    j: int
    point: np.ndarray
    faces: tuple[str, str]
    t_from: Tangent
    t_to: Tangent
    normal: Tangent
    alpha: float


@dataclass
class CheckResult:
    name: str
    status: str
    margin: float | None = None
    message: str = ""
    witness: object = None
    details: object = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "margin": self.margin,
            "message": self.message,
            "witness": self.witness,
            "details": self.details,
        }


def _probe_length(d_hat: float | None) -> float:
    if d_hat is None or not np.isfinite(d_hat) or d_hat <= 0:
        return 1e-3
    return min(d_hat / 10.0, 1e-3)


def _edge_tangents(P: Polyhedron, edge_id: str, y) -> list[np.ndarray]:
    line = P.edge(edge_id).line
    if line is None:
        return []
    v = line.velocity(line.foot(y, clamp=False))
    return [P.space.project_tangent(y, v)]


def face_direction(P: Polyhedron, face_id: str, edge_id: str, y, probe: float) -> np.ndarray:
    """Unit tangent at ``y`` in the face, normal to the edge, pointing into the face.

    The sign is certified by a geodesic probe: one side must land inside the
    face bounds and the other outside.
    """
    face = P.face(face_id)
    against = [face.carrier.gradient(y)] + _edge_tangents(P, edge_id, y)
    (t,) = P.space.tangent_basis(y, against)
    ends = P.space.geodesic_point(np.array([y, y]), np.array([t, -t]), probe)
    m_plus, m_minus = face.bound_margin(ends)
    if m_plus > 0 >= m_minus:
        return t
    if m_minus > 0 >= m_plus:
        return -t
    raise GeometryError(f"cannot certify the inward direction of face {face_id} at edge {edge_id}", witness=np.asarray(y).tolist())


def interior_angle(P: Polyhedron, fp: FacePairing, cycle: EdgeCycle, j: int, x, d_hat: float | None = None) -> AngleTerm:
    """The oriented interior angle ``alpha_j`` at ``I_j x``, for ``x`` on the base edge."""
    terms = cycle.geometric_terms()
    term = terms[j]
    y = term.partial.apply(np.asarray(x, dtype=float))
    h = _probe_length(d_hat)
    space = P.space
    t_from = face_direction(P, term.face_from, term.edge, y, h)
    t_to = face_direction(P, term.face_to, term.edge, y, h)
    n = P.face(term.face_from).normal(y)
    tf, tt, tn = Tangent(space, y, t_from), Tangent(space, y, t_to), Tangent(space, y, n)
    alpha = oriented_angle(tf, tt, (tf, tn))
    if alpha <= 0.0 or alpha >= TWO_PI:
        raise GeometryError(f"degenerate interior angle at term {j} (faces tangent)", witness=y.tolist())
    return AngleTerm(j, y, (term.face_from, term.face_to), tf, tt, tn, alpha)


def angle_terms(P, fp, cycle, x, d_hat=None) -> list[AngleTerm]:
    return [interior_angle(P, fp, cycle, j, x, d_hat) for j in range(cycle.length)]


def edge_points(P: Polyhedron, edge_id: str, k: int = 5) -> np.ndarray:
    """Midpoint first, then ``k - 1`` further samples (one point for dim-2 edges)."""
    mid = edge_midpoint(P, edge_id)
    if P.edge(edge_id).line is None or k <= 1:
        return mid[None, :]
    return np.vstack([mid[None, :], sample_edge(P, edge_id, k - 1)])


def total_angle(P: Polyhedron, fp: FacePairing, cycle: EdgeCycle, x=None, d_hat=None, config: Config = DEFAULT) -> float:
    """Sum of ``alpha_j`` over the geometric cycle (``n k`` terms)."""
    if x is None:
        x = edge_midpoint(P, cycle.base_edge)
    return float(sum(t.alpha for t in angle_terms(P, fp, cycle, x, d_hat)))


# ---------------------------------------------------------------------------
# condition (1): interior into exterior
# ---------------------------------------------------------------------------


def condition1_margins(P: Polyhedron, fp: FacePairing, samples: int = 16) -> dict[str, tuple[float, list]]:
    """Per face: max |dI_s(n_s) + n_{s̄}| over sampled face points, with the worst point."""
    space = P.space
    out = {}
    for face in P.faces:
        X = sample_face(P, face.id, samples)
        if not len(X):
            out[face.id] = (0.0, None)
            continue
        g = fp.iso[face.id]
        Y = g.apply(X)
        img = face.normal(X) @ g.linear.T
        target = -P.face(fp.partner[face.id]).normal(Y)
        dev = space.norm(img - target)
        i = int(np.argmax(dev))
        out[face.id] = (float(dev[i]), X[i].tolist())
    return out


def check_condition1(P: Polyhedron, fp: FacePairing, config: Config = DEFAULT, samples: int | None = None) -> CheckResult:
    margins = condition1_margins(P, fp, samples or config.samples)
    worst = max(margins, key=lambda f: margins[f][0]) if margins else None
    dev = margins[worst][0] if worst else 0.0
    details = {f: m for f, (m, _) in sorted(margins.items())}
    if dev >= config.tol_ang:
        return CheckResult("condition1", FAIL, dev, f"I_{worst} sends the interior normal of {worst} to {dev:.3g} away from the exterior normal of {fp.partner[worst]}", {"face": worst, "point": margins[worst][1]}, details)
    return CheckResult("condition1", PASS, dev, "every pairing sends interior into exterior", None, details)


# ---------------------------------------------------------------------------
# condition (2): total interior angle 2 pi
# ---------------------------------------------------------------------------


def cycle_angles(P, fp, cycle, d_hat=None, points: int = 5) -> dict:
    """Angles of one geometric cycle at its designated point and at extra edge samples."""
    X = edge_points(P, cycle.base_edge, points)
    per_point = []
    for x in X:
        per_point.append([t.alpha for t in angle_terms(P, fp, cycle, x, d_hat)])
    per_point = np.array(per_point)
    totals = per_point.sum(axis=1)
    comb = per_point[:, : cycle.n].sum(axis=1)
    return {
        "base_edge": cycle.base_edge,
        "alphas": per_point[0].tolist(),
        "total": float(totals[0]),
        "combinatorial_total": float(comb[0]),
        "totals": totals.tolist(),
        "constancy": float(np.max(np.abs(totals - totals[0]))),
    }


def check_condition2(P: Polyhedron, fp: FacePairing, cycles: list[EdgeCycle], config: Config = DEFAULT, d_hat=None, points: int = 5) -> CheckResult:
    per = pmap(lambda c: cycle_angles(P, fp, c, d_hat, points), cycles)
    if not per:
        return CheckResult("condition2", PASS, 0.0, "no edges, nothing to check", None, [])
    devs = [abs(c["total"] - TWO_PI) for c in per]
    i = int(np.argmax(devs))
    if devs[i] >= config.tol_ang:
        c = per[i]
        msg = f"total angle at {c['base_edge']} is {c['total']:.9f} (combinatorial {c['combinatorial_total']:.9f}), not 2π"
        return CheckResult("condition2", FAIL, devs[i], msg, {"edge": c["base_edge"], "total": c["total"], "combinatorial_total": c["combinatorial_total"]}, per)
    return CheckResult("condition2", PASS, devs[i], "every geometric cycle has total angle 2π", None, per)


def check_sectors(P: Polyhedron, fp: FacePairing, cycle: EdgeCycle, x=None, config: Config = DEFAULT, d_hat=None) -> CheckResult:
    """Sectors of angle alpha_j tile the normal plane and the formal neighbours are distinct."""
    if x is None:
        x = edge_midpoint(P, cycle.base_edge)
    alphas = [t.alpha for t in angle_terms(P, fp, cycle, x, d_hat)]
    small = min(alphas)
    dev = abs(sum(alphas) - TWO_PI)
    partials = [t.partial for t in cycle.geometric_terms()]
    closest = np.inf
    for a in range(len(partials)):
        for b in range(a + 1, len(partials)):
            closest = min(closest, partials[a].distance_to(partials[b]))
    if small <= config.tol_ang:
        return CheckResult("sectors", FAIL, small, f"degenerate sector of angle {small:.3g} at {cycle.base_edge}", {"edge": cycle.base_edge})
    if dev >= config.tol_ang:
        return CheckResult("sectors", FAIL, dev, f"sectors at {cycle.base_edge} sum to {sum(alphas):.9f}, not 2π", {"edge": cycle.base_edge})
    if closest <= config.tol_iso:
        return CheckResult("sectors", FAIL, closest, f"two partial isometries of the cycle at {cycle.base_edge} coincide", {"edge": cycle.base_edge})
    return CheckResult("sectors", PASS, dev, f"{len(alphas)} sectors tile the normal plane", None, {"edge": cycle.base_edge, "min_sector": small, "min_partial_gap": None if not np.isfinite(closest) else float(closest)})


# ---------------------------------------------------------------------------
# condition (3): face neighbourhoods near shared edges
# ---------------------------------------------------------------------------


def epsilon_grid(d_hat: float, floor: float) -> np.ndarray:
    """Halving grid from ``d_hat/2`` down to ``floor`` (largest first)."""
    top = d_hat / 2.0 if np.isfinite(d_hat) else 1.0
    n = max(1, int(np.ceil(np.log2(max(top / floor, 1.0)))) + 1)
    grid = top / 2.0 ** np.arange(n)
    grid[-1] = max(min(grid[-1], top), floor)
    return grid


def _near_edge_samples(P, face_id, edge_id, samples, reach, probe):
    """Points of the face at geometrically spaced distances from the edge."""
    space = P.space
    base = edge_points(P, edge_id, min(samples, 8))
    radii = np.geomspace(1e-10, max(reach, 1e-9), 40)
    pts = []
    for y in base:
        t = face_direction(P, face_id, edge_id, y, probe)
        pts.append(space.geodesic_point(np.repeat(y[None, :], len(radii), axis=0), np.repeat(t[None, :], len(radii), axis=0), radii))
    pts = np.concatenate(pts)
    return pts[P.face(face_id).in_bounds(pts, P.tol)]


def pair_epsilon(P: Polyhedron, s: str, s2: str, theta: float, grid: np.ndarray, samples: int, probe: float):
    """Largest grid ``eps`` with s2 ∩ N(s, eps) inside the theta-neighbourhoods of shared edges.

    Returns ``(eps_hat or None, witness point or None, witness distances)``.
    """
    shared = P.shared_edges(s, s2)
    reach = 2.0 * grid[0] if len(grid) else 1.0
    pts = [sample_face(P, s2, max(samples, 16))]
    for e in shared:
        pts.append(_near_edge_samples(P, s2, e, samples, reach, probe))
    X = np.concatenate([p for p in pts if len(p)])
    d_face = face_distance(P, P.face(s), X)
    d_edge = np.min([P.edge(e).distance(P.space, X) for e in shared], axis=0)
    bad = d_edge >= theta

    def holds(eps):
        return not np.any(bad & (d_face < eps))

    lo, hi = 0, len(grid) - 1  # grid is decreasing; find first index that holds
    if not holds(grid[hi]):
        i = int(np.argmin(np.where(bad, d_face, np.inf)))
        return None, X[i].tolist(), (float(d_face[i]), float(d_edge[i]))
    if holds(grid[0]):
        return float(grid[0]), None, None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(grid[mid]):
            hi = mid
        else:
            lo = mid
    return float(grid[hi]), None, None


def check_condition3(P: Polyhedron, fp: FacePairing | None = None, config: Config = DEFAULT, theta: float | None = None, d_hat: float | None = None, samples: int | None = None) -> CheckResult:
    """Sampled falsification search for the face-neighbourhood condition."""
    samples = samples or config.samples
    if d_hat is None:
        d_hat = estimate_separation(P, samples, config).d_hat
    if theta is None:
        theta = d_hat / 4.0 if np.isfinite(d_hat) else 1.0
    grid = epsilon_grid(d_hat, config.tol_mem)
    probe = _probe_length(d_hat)
    pairs = [(a.id, b.id) for a in P.faces for b in P.faces if a.id != b.id and P.shared_edges(a.id, b.id)]
    results = pmap(lambda p: (p, pair_epsilon(P, p[0], p[1], theta, grid, samples, probe)), pairs)
    details = {}
    worst = None
    for (a, b), (eps, wit, dists) in results:
        details[f"{a}|{b}"] = eps
        if eps is None and worst is None:
            worst = (a, b, wit, dists)
    note = "holds analytically for totally geodesic faces in constant curvature; sampled check only"
    if worst is not None:
        a, b, wit, (df, de) = worst
        msg = f"points of {b} within {df:.3g} of {a} lie {de:.3g} from every shared edge (theta {theta:.3g})"
        return CheckResult("condition3", FAIL, None, msg, {"faces": [a, b], "point": wit}, {"theta": theta, "epsilon": details})
    margin = min(details.values()) if details else None
    return CheckResult("condition3", PASS, margin, note, None, {"theta": theta, "epsilon": details})


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    structural: CheckResult
    pairing: CheckResult
    cycles: CheckResult
    condition1: CheckResult
    condition2: CheckResult
    condition3: CheckResult
    sectors: CheckResult
    separation: float | None
    angle_constancy: float | None
    family: list[EdgeCycle] = field(default_factory=list)
    config: Config = DEFAULT

    COMPONENTS = ("structural", "pairing", "cycles", "condition1", "condition2", "condition3", "sectors")

    def components(self) -> list[CheckResult]:
        return [getattr(self, name) for name in self.COMPONENTS]

    @property
    def failing(self) -> list[str]:
        return [c.name for c in self.components() if c.status == FAIL]

    @property
    def overall(self) -> str:
        statuses = [c.status for c in self.components()]
        if FAIL in statuses:
            return FAIL
        if INCONCLUSIVE in statuses:
            return INCONCLUSIVE
        return PASS

    @property
    def verdict(self) -> str:
        return {PASS: "verified (numerically)", FAIL: "hypotheses violated", INCONCLUSIVE: "inconclusive"}[self.overall]


def _skipped(name, why):
    return CheckResult(name, SKIPPED, None, why)


def structural_check(P: Polyhedron, config: Config = DEFAULT):
    """Separation estimate, incidence bookkeeping and interior-normal probes."""
    sep = estimate_separation(P, config.samples, config)
    problems = list(sep.violations)
    for e in P.edges:
        owners = [f.id for f in P.faces if e.id in f.edge_ids]
        if sorted(owners) != sorted(e.incident_faces):
            problems.append({"kind": "incidence", "edge": e.id, "faces": owners})
    probe = _probe_length(sep.d_hat)
    for f in P.faces:
        try:
            interior_normal(P, f.id, face_center(P, f), probe)
        except GeometryError as exc:
            problems.append({"kind": "normal", "face": f.id, "message": str(exc)})
    details = {"d_hat": sep.d_hat, "estimated": True, "categories": sep.categories, "witness": list(sep.witness) if sep.witness else None}
    if problems:
        first = problems[0]
        what = first.get("kind", "violation")
        where = " and ".join(first["pair"]) if "pair" in first else first.get("face") or first.get("edge") or ""
        msg = f"{len(problems)} structural violation(s); first: {what} {where}".rstrip()
        if "ideal_point" in first:
            msg += " meet at an ideal point (distance infimum 0)"
        return sep, CheckResult("structural", FAIL, sep.d_hat, msg, first, details)
    return sep, CheckResult("structural", PASS, sep.d_hat, "cornerless polyhedron axioms hold (d estimated)", None, details)


def verify_all(P: Polyhedron, fp: FacePairing, config: Config = DEFAULT) -> VerificationReport:
    """Run every hypothesis check and aggregate them into one report."""
    sep, structural = structural_check(P, config)
    d_hat = sep.d_hat

    preport = validate_pairing(P, fp, config)
    if preport.ok:
        pairing = CheckResult("pairing", PASS, preport.max_face_residual, "face pairing is consistent", None, {"involution_deviation": preport.max_involution_deviation, "face_residual": preport.max_face_residual})
    else:
        v = preport.violations[0]
        pairing = CheckResult("pairing", FAIL, None, v["message"], v, preport.violations)

    rest = ("cycles", "condition1", "condition2", "condition3", "sectors")
    if not pairing.passed:
        skip = {n: _skipped(n, "pairing invalid") for n in rest}
        return VerificationReport(structural, pairing, separation=d_hat, angle_constancy=None, config=config, **skip)

    condition1 = check_condition1(P, fp, config)
    try:
        condition3 = check_condition3(P, fp, config, d_hat=d_hat)
    except TessellaError as exc:
        condition3 = CheckResult("condition3", FAIL, None, str(exc), exc.witness)

    try:
        family = cycle_family(P, fp, config.mode, config, preport.edge_images)
    except (CycleError, PairingError) as exc:
        cycles = CheckResult("cycles", FAIL, None, str(exc), exc.witness)
        return VerificationReport(structural, pairing, cycles, condition1, _skipped("condition2", "no geometric cycle family"), condition3, _skipped("sectors", "no geometric cycle family"), d_hat, None, [], config)

    cycles = CheckResult("cycles", PASS, max((cycle_residual(P, c) for c in family), default=0.0), f"{len(family)} geometric cycle(s) cover every edge", None, [cycle_summary(P, c) for c in family])
    try:
        condition2 = check_condition2(P, fp, family, config, d_hat)
        constancy = max((c["constancy"] for c in condition2.details), default=0.0)
    except GeometryError as exc:
        condition2, constancy = CheckResult("condition2", FAIL, None, str(exc), exc.witness), None

    if condition1.passed and condition2.passed:
        per = [check_sectors(P, fp, c, None, config, d_hat) for c in family]
        bad = [r for r in per if not r.passed]
        sectors = bad[0] if bad else CheckResult("sectors", PASS, max((r.margin for r in per), default=0.0), "sectors tile every normal plane", None, [r.details for r in per])
    else:
        sectors = _skipped("sectors", "needs conditions (1) and (2)")
    return VerificationReport(structural, pairing, cycles, condition1, condition2, condition3, sectors, d_hat, constancy, family, config)


def cycle_summary(P: Polyhedron, c: EdgeCycle) -> dict:
    return {
        "base_edge": c.base_edge,
        "n": c.n,
        "multiplicity": c.multiplicity,
        "mode": c.mode,
        "edges": c.edges(),
        "residual": cycle_residual(P, c),
        "raw_deviation": c.cycle_iso.power(c.multiplicity).deviation(),
        "notes": list(c.notes),
    }
