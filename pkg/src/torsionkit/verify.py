"""Exhaustive desk-scale search drivers.

Matrix suites sweep the box of 2x3 integer matrices with entries in
``[-bound, bound]``; the box is cut into slabs by the first entry, one slab
per task, and the per-slab results are merged in slab order so the output
does not depend on the worker count.  Matrix checks are necessary numerical
conditions only, which is why reports say "no numerical counterexample".
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import chern
from .engine.closure import check_closure
from .lattice import THEOREM_NAMES, generators
from .profiles import ALL_CIJ, enumerate_profiles

WORKERS_ENV = "TORSIONKIT_WORKERS"
SUITES = ("phi", "daniel", "closures")
DEFAULT_BOUND = 5


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SearchConfig:
    suite: str = "phi"
    bound: int = DEFAULT_BOUND
    workers: int = field(default_factory=default_workers)
    strict_leading: bool = True

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.bound < 1 and self.suite != "closures":
            raise ValueError("matrix suites need bound >= 1")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass
class Report:
    suite: str
    config: dict
    instances: int
    counterexamples: list
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def canonical(self) -> dict:
        """Everything except timing, for byte-level comparisons."""
        return {"suite": self.suite, "config": self.config, "instances": self.instances,
                "counterexamples": self.counterexamples, "details": self.details}

    def to_json(self, timing: bool = False) -> str:
        doc = self.canonical()
        if timing:
            doc["seconds"] = round(self.seconds, 3)
        return json.dumps(doc, sort_keys=True, indent=2)

    def to_text(self) -> str:
        cfg = " ".join(f"{k}={v}" for k, v in sorted(self.config.items()))
        lines = [f"suite {self.suite} ({cfg}): {self.instances} instances checked"]
        for k, v in sorted(self.details.items()):
            if not isinstance(v, (list, dict)):
                lines.append(f"  {k}: {v}")
        if self.ok:
            verdict = "all classes Valid" if self.suite == "closures" else "no numerical counterexample"
            lines.append(f"  result: {verdict}")
        else:
            lines.append(f"  result: {len(self.counterexamples)} counterexample(s)")
            for c in self.counterexamples[:20]:
                lines.append(f"    {c}")
            if len(self.counterexamples) > 20:
                lines.append(f"    ... {len(self.counterexamples) - 20} more")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# slab workers (module level so they pickle)

def _phi_slab(args) -> tuple[int, list]:
    bound, first, phi = args
    ms = chern.box(bound, first)
    p = phi(ms)
    bad = ~np.all(phi(p) == chern.shift_batch(ms), axis=(1, 2))
    p4 = phi(phi(phi(p)))
    bad |= ~np.all(p4 == ms, axis=(1, 2))
    return len(ms), ms[bad].tolist()


def _daniel_slab(args) -> tuple[int, int, list]:
    bound, first, strict = args
    ms = chern.box(bound, first)
    c = chern.codim_batch(ms)
    relevant = chern.admissible_batch(ms, strict_leading=strict) & (c >= 1)
    relevant &= chern.wit_necessary_batch(ms, 1, strict_leading=strict)
    sel = ms[relevant]
    bad = (sel[:, 1, 0] != 0) | (chern.dpi_upper_batch(sel) > 1)
    return len(ms), int(relevant.sum()), sel[bad].tolist()


def _run_slabs(fn: Callable, bound: int, extra: tuple, workers: int) -> list:
    tasks = [(bound, first) + extra for first in range(-bound, bound + 1)]
    if workers == 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _fmt(m) -> str:
    return json.dumps(m, separators=(",", ":"))


# ---------------------------------------------------------------------------
# suites

def verify_phi_shift(cfg: SearchConfig, phi: Optional[Callable] = None) -> Report:
    """phi o phi equals the shift and phi^4 is the identity over the whole box.

    ``phi`` replaces the batch transform, which lets tests inject a faulty one.
    """
    t0 = time.perf_counter()
    parts = _run_slabs(_phi_slab, cfg.bound, (phi or chern.phi_batch,), cfg.workers)
    instances = sum(n for n, _ in parts)
    bad = sorted(m for _, ms in parts for m in ms)
    return Report("phi", {"bound": cfg.bound}, instances, [_fmt(m) for m in bad],
                  {"expected instances": (2 * cfg.bound + 1) ** 6},
                  time.perf_counter() - t0)


def verify_lemma_daniel(cfg: SearchConfig) -> Report:
    """Admissible classes of codimension >= 1 passing the WIT1 test have a10 = 0 and dpi <= 1."""
    t0 = time.perf_counter()
    parts = _run_slabs(_daniel_slab, cfg.bound, (cfg.strict_leading,), cfg.workers)
    instances = sum(p[0] for p in parts)
    relevant = sum(p[1] for p in parts)
    bad = sorted(m for p in parts for m in p[2])
    return Report("daniel", {"bound": cfg.bound, "strict_leading": cfg.strict_leading},
                  instances, [_fmt(m) for m in bad],
                  {"relevant (admissible, codim >= 1, WIT1 test passed)": relevant},
                  time.perf_counter() - t0)


def verify_profile_closures(cfg: Optional[SearchConfig] = None,
                            names: tuple[str, ...] = THEOREM_NAMES) -> Report:
    """Quotient and extension closure of each class over the consistent profiles."""
    t0 = time.perf_counter()
    ordered = sorted(names, key=lambda n: (len(generators(n).generators), names.index(n)))
    done = []
    verdicts = {}
    for n in ordered:
        v = check_closure(n, done)
        verdicts[n] = v
        if v.ok:
            done.append(generators(n))
    profiles = enumerate_profiles()
    lines = [verdicts[n].line() for n in names]
    bad = [verdicts[n].line() for n in names if not verdicts[n].ok]
    return Report("closures", {"classes": len(names)}, len(profiles) * len(names), bad,
                  {"profiles": len(profiles), "generator categories": len(ALL_CIJ),
                   "verdicts": lines}, time.perf_counter() - t0)


def run_suite(cfg: SearchConfig) -> Report:
    if cfg.suite == "phi":
        return verify_phi_shift(cfg)
    if cfg.suite == "daniel":
        return verify_lemma_daniel(cfg)
    return verify_profile_closures(cfg)
