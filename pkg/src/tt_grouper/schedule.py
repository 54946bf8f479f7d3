"""Solutions (grouping plus first-occurrence interval), their evaluation and
expansion into explicit start times under canonical order.

Row ``k`` of the stacked view is the window ``[k*T0, (k+1)*T0)``. A group of
period ``T_u`` whose first occurrence is in interval ``k`` (``0 <= k < T_u/T0``)
occupies rows ``k, k + T_u/T0, k + 2*T_u/T0, ...``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence, TextIO

from .instance import (Instance, InstanceFormatError, ValidationReport,
                       Violation, derive_period_structure)


@dataclass(frozen=True)
class GroupRecord:
    period_index: int
    group_id: int
    members: tuple[str, ...]

    @property
    def key(self) -> tuple[int, int]:
        return (self.period_index, self.group_id)


@dataclass(frozen=True)
class Solution:
    groups: tuple[GroupRecord, ...]
    # (period_index, group_id) -> interval of the first occurrence
    assignment: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "assignment", dict(self.assignment))

    @classmethod
    def from_groups(cls, groups: Iterable[tuple[int, Sequence[str], int]]) -> "Solution":
        """Build from ``(period_index, members, interval)`` triples; group ids
        are numbered 1, 2, ... per period in the order given."""
        next_id: dict[int, int] = {}
        recs, assign = [], {}
        for u, members, k in groups:
            j = next_id.get(u, 0) + 1
            next_id[u] = j
            recs.append(GroupRecord(u, j, tuple(members)))
            if members:
                assign[(u, j)] = k
        return cls(tuple(recs), assign)

    def nonempty(self) -> list[GroupRecord]:
        return [g for g in self.groups if g.members]


class InvalidSolutionError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"invalid solution:\n{report}")


def group_size(members: Iterable[str], instance: Instance) -> int:
    members = list(members)
    if not members:
        return 0
    try:
        return instance.header_size + sum(instance.task_by_id[m].proc for m in members)
    except KeyError as e:
        raise KeyError(f"unknown task id {e.args[0]!r}") from None


def check_solution(instance: Instance, solution: Solution) -> ValidationReport:
    out: list[Violation] = []
    counts = derive_period_structure(instance).interval_counts
    seen: dict[str, int] = {}
    keys: set[tuple[int, int]] = set()
    for g in solution.groups:
        if g.key in keys:
            out.append(Violation("NOT_PARTITION", f"group id {g.key} used twice"))
        keys.add(g.key)
        if not 0 <= g.period_index < len(instance.periods):
            out.append(Violation("MIXED_PERIOD_GROUP", f"group {g.key}: no period index {g.period_index}"))
            continue
        period = instance.periods[g.period_index]
        for m in g.members:
            t = instance.task_by_id.get(m)
            if t is None:
                out.append(Violation("NOT_PARTITION", f"group {g.key}: unknown task {m!r}"))
                continue
            seen[m] = seen.get(m, 0) + 1
            if t.period != period:
                out.append(Violation("MIXED_PERIOD_GROUP",
                                     f"group {g.key} has period {period} but task {m} has period {t.period}"))
        if not g.members:
            continue
        size = group_size([m for m in g.members if m in instance.task_by_id], instance)
        if size > instance.max_group_size:
            out.append(Violation("GROUP_TOO_LARGE",
                                 f"group {g.key}: size {size} > max group size {instance.max_group_size}"))
        k = solution.assignment.get(g.key)
        if k is None:
            out.append(Violation("UNASSIGNED_NONEMPTY_GROUP", f"group {g.key} has no interval"))
        elif not 0 <= k < counts[g.period_index]:
            out.append(Violation("INTERVAL_OUT_OF_RANGE",
                                 f"group {g.key}: interval {k} not in [0, {counts[g.period_index]})"))
    for t in instance.tasks:
        n = seen.get(t.id, 0)
        if n != 1:
            out.append(Violation("NOT_PARTITION", f"task {t.id} appears in {n} groups"))
    return ValidationReport(tuple(out))


def _require_valid(instance: Instance, solution: Solution):
    report = check_solution(instance, solution)
    if not report.ok:
        raise InvalidSolutionError(report)


@dataclass(frozen=True)
class Evaluation:
    period_loads: tuple[tuple[int, ...], ...]
    row_totals: tuple[int, ...]
    cmax: int
    feasible: bool
    margin: int


def period_loads(instance: Instance, solution: Solution) -> list[list[int]]:
    counts = derive_period_structure(instance).interval_counts
    loads = [[0] * c for c in counts]
    for g in solution.groups:
        if g.members:
            loads[g.period_index][solution.assignment[g.key]] += group_size(g.members, instance)
    return loads


def evaluate(instance: Instance, solution: Solution) -> Evaluation:
    _require_valid(instance, solution)
    ps = derive_period_structure(instance)
    loads = period_loads(instance, solution)
    rows = tuple(sum(p[k % len(p)] for p in loads) for k in range(ps.row_count))
    cmax = max(rows, default=0)
    t0 = instance.base_period
    return Evaluation(tuple(map(tuple, loads)), rows, cmax, cmax <= t0, t0 - cmax)


# -- explicit timeline -------------------------------------------------------

class Occurrence(NamedTuple):
    period_index: int
    group_id: int
    index: int      # m: occurrence number within the hyperperiod
    row: int
    start: int
    end: int


@dataclass(frozen=True)
class ScheduleTimeline:
    occurrences: tuple[Occurrence, ...]
    row_count: int
    base_period: int

    def by_row(self) -> list[list[Occurrence]]:
        rows: list[list[Occurrence]] = [[] for _ in range(self.row_count)]
        for o in self.occurrences:
            rows[o.row].append(o)
        return rows


def expand_start_times(instance: Instance, solution: Solution) -> ScheduleTimeline:
    """Lay out every occurrence back to back within its row, ordered by
    (period index, group id)."""
    _require_valid(instance, solution)
    ps = derive_period_structure(instance)
    t0 = instance.base_period
    buckets: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for g in sorted(solution.nonempty(), key=lambda g: g.key):
        k = solution.assignment[g.key]
        buckets.setdefault((g.period_index, k), []).append((g.group_id, group_size(g.members, instance)))
    occ: list[Occurrence] = []
    for row in range(ps.row_count):
        t = row * t0
        for u, count in enumerate(ps.interval_counts):
            for gid, size in buckets.get((u, row % count), ()):
                occ.append(Occurrence(u, gid, row // count, row, t, t + size))
                t += size
    return ScheduleTimeline(tuple(occ), ps.row_count, t0)


def timeline_consistency(instance: Instance, solution: Solution) -> bool:
    """Cross-check :func:`expand_start_times` against :func:`evaluate`."""
    ev = evaluate(instance, solution)
    tl = expand_start_times(instance, solution)
    t0 = instance.base_period
    counts = derive_period_structure(instance).interval_counts
    ends = [0] * tl.row_count
    for row, occs in enumerate(tl.by_row()):
        occs = sorted(occs, key=lambda o: o.start)
        prev = row * t0
        for o in occs:
            if o.start < prev or o.end < o.start:
                return False
            prev = o.end
        ends[row] = prev - row * t0
    if tuple(ends) != ev.row_totals:
        return False
    if max(ends, default=0) != ev.cmax:
        return False
    firsts: dict[tuple[int, int], list[Occurrence]] = {}
    for o in tl.occurrences:
        firsts.setdefault((o.period_index, o.group_id), []).append(o)
    if set(firsts) != {g.key for g in solution.nonempty()}:
        return False
    for (u, _), occs in firsts.items():
        occs.sort(key=lambda o: o.index)
        if len(occs) != tl.row_count // counts[u]:
            return False
        period = instance.periods[u]
        s0 = occs[0].start
        if any(o.index != m or o.start != s0 + m * period for m, o in enumerate(occs)):
            return False
    return True


# -- solution file format ----------------------------------------------------

def serialize_solution(solution: Solution, cmax: int | None = None) -> str:
    buf = io.StringIO()
    if cmax is not None:
        buf.write(f"cmax {cmax}\n")
    for g in sorted(solution.nonempty(), key=lambda g: g.key):
        buf.write(f"group {g.period_index} {g.group_id} interval {solution.assignment[g.key]} "
                  f"tasks {' '.join(g.members)}\n")
    return buf.getvalue()


def parse_solution(text: str | TextIO) -> tuple[Solution, int | None]:
    if not isinstance(text, str):
        text = text.read()
    groups, assign, cmax = [], {}, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "cmax" and len(tok) == 2:
                cmax = int(tok[1])
            elif tok[0] == "group" and len(tok) >= 6 and tok[3] == "interval" and tok[5] == "tasks":
                u, j, k = int(tok[1]), int(tok[2]), int(tok[4])
                groups.append(GroupRecord(u, j, tuple(tok[6:])))
                assign[(u, j)] = k
            else:
                raise InstanceFormatError("SYNTAX", f"cannot parse {line!r}", lineno)
        except ValueError as e:
            if isinstance(e, InstanceFormatError):
                raise
            raise InstanceFormatError("BAD_VALUE", str(e), lineno) from None
    return Solution(tuple(groups), assign), cmax
