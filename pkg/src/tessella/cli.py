"""Command line: ``tessella verify | cycles | develop | presentation FILE``.

Exit codes: 0 pass, 1 a hypothesis or check fails, 2 inconclusive,
3 input or schema error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import develop as dv
from .config import DEFAULT, MODES
from .errors import CycleError, InputError, PairingError, StructuralError, TessellaError
from .io import load
from .pairing import cycle_family, cycle_residual, validate_pairing
from .report import dumps, provenance, verification_dict, verification_text
from .verify import FAIL, INCONCLUSIVE, PASS, cycle_summary, verify_all

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_INPUT = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tessella", description="Check polyhedron-theorem hypotheses on a polyhedron with face pairings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="input JSON document, or the name of a shipped fixture")
        sp.add_argument("--tol-iso", type=float)
        sp.add_argument("--tol-mem", type=float)
        sp.add_argument("--tol-ang", type=float)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--mode", choices=MODES)
        sp.add_argument("--json", action="store_true", help="print the machine-readable report")

    common(sub.add_parser("verify", help="run every hypothesis check"))
    common(sub.add_parser("cycles", help="print the geometric cycle family"))
    d = sub.add_parser("develop", help="develop translates and check overlap and covering")
    common(d)
    d.add_argument("--depth", type=int, default=2)
    d.add_argument("--svg", help="write an SVG drawing of the development (planar inputs)")
    d.add_argument("--chart", choices=dv.CHARTS)
    d.add_argument("--center", help="comma-separated model coordinates of the covering ball centre")
    d.add_argument("--radius", type=float)
    d.add_argument("--unsafe", action="store_true", help="develop even if verification does not pass")
    pr = sub.add_parser("presentation", help="print the group presentation")
    common(pr)
    pr.add_argument("--unsafe", action="store_true", help="print even if verification does not pass")
    return p


def _config(args, problem):
    cfg = problem.config.updated(tol_iso=args.tol_iso, tol_mem=args.tol_mem, tol_ang=args.tol_ang, samples=args.samples, mode=args.mode)
    return cfg


def _structural_failure(args, exc: StructuralError, out) -> int:
    if args.json:
        out.write(dumps({"command": args.command, "overall": FAIL, "failing": ["structural"], "components": {"structural": {"status": FAIL, "message": str(exc), "kind": exc.kind, "witness": exc.witness}}}))
    else:
        out.write(f"structural   fail  {exc.kind}: {exc}\nverdict: hypotheses violated\n")
    return EXIT[FAIL]


def cmd_verify(args, problem, cfg, out) -> int:
    report = verify_all(problem.polyhedron, problem.pairing, cfg)
    if args.json:
        doc = {"provenance": provenance(problem, cfg, "verify")}
        doc.update(verification_dict(report))
        doc["cycles"] = [cycle_summary(problem.polyhedron, c) for c in report.family]
        out.write(dumps(doc))
    else:
        out.write(verification_text(report, problem.name))
    return EXIT[report.overall]


def cmd_cycles(args, problem, cfg, out) -> int:
    P, fp = problem.polyhedron, problem.pairing
    rep = validate_pairing(P, fp, cfg)
    if not rep.ok:
        out.write(f"pairing invalid: {rep.violations[0]['message']}\n")
        return EXIT[FAIL]
    try:
        family = cycle_family(P, fp, cfg.mode, cfg, rep.edge_images)
    except (CycleError, PairingError) as exc:
        out.write(f"no geometric cycle family: {exc}\n")
        return EXIT[FAIL]
    if args.json:
        doc = {"provenance": provenance(problem, cfg, "cycles"), "cycles": [dict(cycle_summary(P, c), arrow=c.arrow()) for c in family]}
        out.write(dumps(doc))
        return 0
    out.write(f"{len(family)} geometric cycle(s)\n")
    for c in family:
        res = cycle_residual(P, c)
        out.write(f"cycle at {c.base_edge}: n={c.n} k={c.multiplicity} mode={c.mode} residual={res:.3e}\n")
        out.write(f"  {c.arrow()}\n")
        for note in c.notes:
            out.write(f"  note: {note}\n")
    return 0


def _parse_center(text, space):
    try:
        coords = [float(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"--center must be comma-separated numbers, got {text!r}") from None
    if len(coords) != space.ambient:
        raise InputError(f"--center needs {space.ambient} coordinates")
    return space.point(coords)


def _combine(name, parts):
    statuses = [p.status for p in parts]
    status = FAIL if FAIL in statuses else INCONCLUSIVE if INCONCLUSIVE in statuses else PASS
    message = "; ".join(f"{p.name}: {p.message}" for p in parts)
    witnesses = [w for p in parts for w in p.witnesses][:10]
    return dv.CheckOutcome(name, status, message, witnesses, {p.name: p.as_dict() for p in parts})


def cmd_develop(args, problem, cfg, out) -> int:
    P, fp = problem.polyhedron, problem.pairing
    report = verify_all(P, fp, cfg)
    if report.overall != PASS and not args.unsafe:
        out.write(f"verification did not pass ({report.overall}); rerun with --unsafe to develop anyway\n")
        return EXIT[report.overall]
    d_hat = report.separation
    family = report.family
    if not family and P.edges:
        try:
            family = cycle_family(P, fp, cfg.mode, cfg)
        except TessellaError:
            family = []
    dev = dv.enumerate_translates(P, fp, args.depth, cfg)
    translates = dv.overlap_check(dev, P, 4 * cfg.samples, d_hat, cfg)
    if family or not P.edges:
        ramification = dv.ramification_check(P, fp, family, 8 * cfg.samples, d_hat, cfg)
    else:
        ramification = dv.CheckOutcome("ramification", INCONCLUSIVE, "no geometric cycle family to build formal neighbours")
    # a ramified edge is an overlap that shallow developments cannot reach yet
    overlap = _combine("overlap", [translates, ramification])
    center = _parse_center(args.center, P.space) if args.center else None
    covering = dv.covering_check(dev, P, center, args.radius, 16 * cfg.samples, d_hat, cfg, family)
    if args.svg:
        dv.export_svg(dev, P, args.svg, args.chart)

    statuses = [overlap.status, covering.status, dev.status]
    overall = FAIL if FAIL in statuses else INCONCLUSIVE if INCONCLUSIVE in statuses else PASS
    if args.json:
        doc = {
            "provenance": provenance(problem, cfg, "develop"),
            "verification": report.overall,
            "depth": args.depth,
            "translates": len(dev),
            "words": [dv.format_word(fp, t.word) for t in dev.translates],
            "dedup": {"status": dev.status, "ambiguous": [[dv.format_word(fp, a), dv.format_word(fp, b), d] for a, b, d in dev.ambiguous]},
            "overlap": overlap.as_dict(),
            "covering": covering.as_dict(),
            "overall": overall,
            "note": f"corroborated to depth {args.depth}; not a proof",
        }
        out.write(dumps(doc))
    else:
        if report.overall != PASS:
            out.write(f"warning: verification {report.overall} ({', '.join(report.failing) or 'inconclusive'}); developing anyway\n")
        out.write(f"depth {args.depth}: {len(dev)} translates (dedup {dev.status})\n")
        out.write(f"overlap      {overlap.status:<13} translates: {translates.message}\n")
        out.write(f"{'':<27}local: {ramification.message}\n")
        out.write(f"covering     {covering.status:<13} {covering.message}\n")
        if args.svg:
            out.write(f"svg written to {args.svg}\n")
        out.write(f"tiling corroborated to depth {args.depth}: {'yes' if overall == PASS else 'no'}\n")
    return EXIT[overall]


def cmd_presentation(args, problem, cfg, out) -> int:
    P, fp = problem.polyhedron, problem.pairing
    report = verify_all(P, fp, cfg)
    if report.overall != PASS and not args.unsafe:
        out.write(f"verification did not pass ({report.overall}); rerun with --unsafe to print anyway\n")
        return EXIT[report.overall]
    pres = dv.presentation(P, fp, report.family)
    if args.json:
        doc = {"provenance": provenance(problem, cfg, "presentation"), "generators": pres.generators, "relations": [pres.relation_text(r) for r in pres.relations]}
        out.write(dumps(doc))
    else:
        out.write(pres.to_text())
    return 0


COMMANDS = {"verify": cmd_verify, "cycles": cmd_cycles, "develop": cmd_develop, "presentation": cmd_presentation}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    try:
        problem = load(args.file, DEFAULT)
        cfg = _config(args, problem)
        if getattr(args, "depth", 0) is not None and getattr(args, "depth", 0) < 0:
            raise InputError("--depth must be non-negative")
        return COMMANDS[args.command](args, problem, cfg, out)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StructuralError as exc:
        return _structural_failure(args, exc, out)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> None:
    np.seterr(all="ignore")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
