"""Solver comparison (success counts, best gap, rank) and parameter sweeps."""
from __future__ import annotations

import csv
import io
import json
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .bounds import compute_bounds
from .instance import Instance, parse_instance, validate
from .methods import run_method
from .schedule import check_solution
from .search import SolveLimits
from . import suites


@dataclass
class RunRecord:
    instance_id: str
    method: str
    cmax: int | None
    optimal: bool
    wall_time: float
    seed: int
    note: str = ""

    @property
    def success(self) -> bool:
        return self.cmax is not None


@dataclass
class MethodSummary:
    method: str
    successes: int
    mean_bg: float | None
    median_bg: float | None
    mean_rank: float


def best_gap(records: Sequence[RunRecord]) -> dict[str, float]:
    """Percent excess over the best Cmax of the instance; failed runs are left
    out. Empty when no run succeeded."""
    ok = [r for r in records if r.success]
    if not ok:
        return {}
    best = min(r.cmax for r in ok)
    if best == 0:
        return {r.method: 0.0 if r.cmax == 0 else float("inf") for r in ok}
    return {r.method: 100.0 * (r.cmax - best) / best for r in ok}


def rank(records: Sequence[RunRecord]) -> dict[str, float]:
    """Rank by ascending Cmax, ties share the average rank; failures come last
    (tied among themselves)."""
    key = {r.method: (0, r.cmax) if r.success else (1, 0) for r in records}
    ordered = sorted(key, key=lambda m: key[m])
    out: dict[str, float] = {}
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and key[ordered[j + 1]] == key[ordered[i]]:
            j += 1
        avg = (i + 1 + j + 1) / 2
        for m in ordered[i:j + 1]:
            out[m] = avg
        i = j + 1
    return out


def compare(records: Iterable[RunRecord], methods: Sequence[str] | None = None) -> list[MethodSummary]:
    by_instance: dict[str, list[RunRecord]] = {}
    for r in records:
        by_instance.setdefault(r.instance_id, []).append(r)
    if methods is None:
        methods = list(dict.fromkeys(r.method for recs in by_instance.values() for r in recs))
    gaps = {m: [] for m in methods}
    ranks = {m: [] for m in methods}
    succ = {m: 0 for m in methods}
    for recs in by_instance.values():
        if not any(r.success for r in recs):
            continue
        for m, g in best_gap(recs).items():
            gaps[m].append(g)
        for m, rk in rank(recs).items():
            ranks[m].append(rk)
        for r in recs:
            succ[r.method] += r.success
    return [MethodSummary(m, succ[m],
                          statistics.fmean(gaps[m]) if gaps[m] else None,
                          statistics.median(gaps[m]) if gaps[m] else None,
                          statistics.fmean(ranks[m]) if ranks[m] else float("nan"))
            for m in methods]


# -- running -----------------------------------------------------------------

def _run_one(job) -> RunRecord:
    instance_id, instance, method, limits, seed = job
    report = validate(instance)
    if not report.ok:
        return RunRecord(instance_id, method, None, False, 0.0, seed,
                         ";".join(v.code for v in report.errors()))
    try:
        res = run_method(instance, method, limits, seed=seed)
    except Exception as e:   # a failing method is data, not a crash
        return RunRecord(instance_id, method, None, False, 0.0, seed, f"{type(e).__name__}: {e}")
    if res.solution is None or not check_solution(res.instance, res.solution).ok:
        return RunRecord(instance_id, method, None, False, res.wall_time, seed, "invalid solution")
    return RunRecord(instance_id, method, res.cmax, res.optimal, res.wall_time, seed)


def default_workers() -> int:
    return int(os.environ.get("TT_GROUPER_WORKERS", "1"))


def run_suite(entries: Sequence[tuple[str, Instance, int]], methods: Sequence[str],
              limits: SolveLimits | None = None, workers: int | None = None) -> list[RunRecord]:
    """Run every method on every ``(instance_id, instance, seed)``; results come
    back in entry-then-method order regardless of ``workers``."""
    limits = limits or SolveLimits()
    jobs = [(iid, inst, m, limits, seed) for iid, inst, seed in entries for m in methods]
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def load_manifest(path: str | Path) -> tuple[list[tuple[str, Instance, int]], dict]:
    """JSON manifest::

        {"instances": [{"path": "a.txt", "seed": 0}, ...],
         "micro": {"count": 20, "start": 0},
         "large": {"seeds": [1, 2]},
         "methods": ["greedy", "local"],
         "limits": {"time_limit": 10, "node_limit": 100000}}

    Paths are relative to the manifest. Everything except one instance source
    is optional.
    """
    path = Path(path)
    spec = json.loads(path.read_text())
    entries = []
    for item in spec.get("instances", []):
        p = path.parent / item["path"]
        entries.append((item.get("id", p.stem), parse_instance(p.read_text()), int(item.get("seed", 0))))
    if "micro" in spec:
        start = int(spec["micro"].get("start", 0))
        for s in range(start, start + int(spec["micro"]["count"])):
            entries.append((f"micro-{s}", suites.micro_instance(s), s))
    for s in spec.get("large", {}).get("seeds", []):
        entries.append((f"large-{s}", suites.large_instance(s), s))
    return entries, spec


# -- sweeps ------------------------------------------------------------------

@dataclass
class SweepCell:
    header_size: int
    max_group_size: int
    cmax: int | None
    optimal: bool
    upper: int | None
    lower: int | None
    note: str = ""


def sweep(instance: Instance, hs_values: Sequence[int], smax_values: Sequence[int],
          method: str = "exact", limits: SolveLimits | None = None) -> list[SweepCell]:
    cells = []
    for hs in hs_values:
        for smax in smax_values:
            inst = instance.replace(header_size=hs, max_group_size=smax)
            report = validate(inst)
            if not report.ok:
                cells.append(SweepCell(hs, smax, None, False, None, None,
                                       ";".join(sorted({v.code for v in report.errors()}))))
                continue
            res = run_method(inst, method, limits)
            b = compute_bounds(inst, limits)
            cells.append(SweepCell(hs, smax, res.cmax, res.optimal, b.upper, b.lower))
    return cells


# -- csv ---------------------------------------------------------------------

def _fmt(v: float | None) -> str:
    return "" if v is None else f"{v:.2f}"


def table_csv(summary: Sequence[MethodSummary]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "successes", "mean_bg", "median_bg", "mean_rank"])
    for s in summary:
        w.writerow([s.method, s.successes, _fmt(s.mean_bg), _fmt(s.median_bg), _fmt(s.mean_rank)])
    return buf.getvalue()


RECORD_FIELDS = ["instance_id", "method", "cmax", "optimal", "seed", "note"]


def records_csv(records: Sequence[RunRecord], timings: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS + (["wall_time"] if timings else []))
    for r in records:
        row = [r.instance_id, r.method, "" if r.cmax is None else r.cmax,
               int(r.optimal), r.seed, r.note]
        if timings:
            row.append(f"{r.wall_time:.4f}")
        w.writerow(row)
    return buf.getvalue()


def read_records_csv(text: str) -> list[RunRecord]:
    """Read records, e.g. results of external solvers run on exported LP files."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        cmax = row.get("cmax", "")
        out.append(RunRecord(row["instance_id"], row["method"], int(cmax) if cmax != "" else None,
                             row.get("optimal", "0") in ("1", "true", "True"),
                             float(row.get("wall_time") or 0.0), int(row.get("seed") or 0),
                             row.get("note", "")))
    return out


def sweep_csv(cells: Sequence[SweepCell]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["hs", "smax", "cmax", "optimal", "upper", "lower", "note"])
    for c in cells:
        w.writerow([c.header_size, c.max_group_size, "" if c.cmax is None else c.cmax,
                    int(c.optimal), "" if c.upper is None else c.upper,
                    "" if c.lower is None else c.lower, c.note])
    return buf.getvalue()
