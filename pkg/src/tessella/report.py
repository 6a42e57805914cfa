"""Machine (JSON) and human (tabular text) renderings of results."""

from __future__ import annotations

import json
import math

import numpy as np

from . import __version__
from .config import Config
from .verify import VerificationReport


def jsonable(obj):
    """Plain JSON types; non-finite floats become the strings "inf", "-inf", "nan"."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return obj


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def provenance(problem, config: Config, command: str) -> dict:
    return {
        "tool": "tessella",
        "version": __version__,
        "command": command,
        "input": {"name": problem.name, "sha256": problem.digest},
        "tolerances": {"tol_iso": config.tol_iso, "tol_mem": config.tol_mem, "tol_ang": config.tol_ang},
        "sampling": {"samples": config.samples, "window": config.window, "sequence": "Halton/van der Corput, unscrambled", "seed": config.seed},
        "mode": config.mode,
        "k_max": config.k_max,
    }


def verification_dict(report: VerificationReport) -> dict:
    comps = {c.name: c.as_dict() for c in report.components()}
    return {
        "overall": report.overall,
        "verdict": report.verdict,
        "failing": report.failing,
        "components": comps,
        "separation": {"d_hat": report.separation, "estimated": True},
        "angle_constancy": report.angle_constancy,
    }


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.3e}" if v != 0 and (abs(v) < 1e-3 or abs(v) >= 1e4) else f"{v:.6f}"
    return str(v)


def verification_text(report: VerificationReport, name: str = "") -> str:
    lines = []
    if name:
        lines.append(f"input: {name}")
    lines.append(f"{'check':<12} {'status':<13} {'margin':>14}  note")
    lines.append("-" * 72)
    for c in report.components():
        lines.append(f"{c.name:<12} {c.status:<13} {_fmt(c.margin):>14}  {c.message}")
    lines.append("-" * 72)
    lines.append(f"separation d (estimated): {_fmt(report.separation)}")
    lines.append(f"angle constancy (max deviation): {_fmt(report.angle_constancy)}")
    c2 = report.condition2
    if isinstance(c2.details, list):
        for d in c2.details:
            lines.append(f"cycle at {d['base_edge']}: total angle {d['total']:.9f} (combinatorial {d['combinatorial_total']:.9f})")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines) + "\n"
