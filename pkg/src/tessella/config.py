"""Numerical tolerances and sampling knobs shared by every check."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

STRICT = "strict"
REMARK31 = "remark31"
MODES = (STRICT, REMARK31)


@dataclass(frozen=True)
class Config:
    """Tolerances and sampling parameters.

    ``tol_iso`` bounds matrix identities, ``tol_mem`` bounds membership on
    hypersurfaces and on the hyperboloid sheet, ``tol_ang`` bounds angle
    comparisons (radians).
    """

    tol_iso: float = 1e-8
    tol_mem: float = 1e-9
    tol_ang: float = 1e-6
    samples: int = 16
    mode: str = STRICT
    k_max: int = 64
    window: float = 6.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if min(self.tol_iso, self.tol_mem, self.tol_ang) <= 0:
            raise ValueError("tolerances must be positive")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def updated(self, **changes) -> "Config":
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Config()


def thread_cap() -> int:
    """Worker cap from ``TESSELLA_THREADS`` (default 1, i.e. serial)."""
    raw = os.environ.get("TESSELLA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map, threaded when ``TESSELLA_THREADS`` > 1."""
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
