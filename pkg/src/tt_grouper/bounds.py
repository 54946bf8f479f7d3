"""Bounds on the optimal Cmax from two reduced models and a utilization argument.

* upper: every task is its own group; any such placement is a valid schedule.
* lower: per period and interval all tasks share one header and the group size
  cap is dropped; merging the groups of any schedule this way never increases
  a row total, so the optimum of this model never exceeds the true optimum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .heuristic import (LocalSearchConfig, construct_greedy, local_search,
                        merge_same_interval, unbounded_copy)
from .instance import Instance, PeriodStructure, derive_period_structure
from .schedule import Solution
from .search import MERGED, SINGLETON, SolveLimits, branch_and_bound

UPPER_SINGLETON = "UPPER_SINGLETON"
LOWER_MERGED = "LOWER_MERGED"


@dataclass(frozen=True)
class ReducedProblem:
    kind: str
    # per period: item sizes (upper) or task payloads sharing one header per interval (lower)
    items: tuple[tuple[int, ...], ...]
    structure: PeriodStructure
    instance: Instance   # the instance the reduced solutions refer to (cap dropped for lower)


class ReducedResult(NamedTuple):
    value: int
    solution: Solution
    optimal: bool


@dataclass
class BoundsReport:
    lower: int
    upper: int
    analytic_lower: int
    lower_optimal: bool = True
    upper_optimal: bool = True
    method: dict = field(default_factory=dict)


def upper_bound_problem(instance: Instance) -> ReducedProblem:
    hs = instance.header_size
    items = tuple(tuple(hs + t.proc for t in cls) for cls in instance.tasks_by_period)
    return ReducedProblem(UPPER_SINGLETON, items, derive_period_structure(instance), instance)


def lower_bound_problem(instance: Instance) -> ReducedProblem:
    items = tuple(tuple(t.proc for t in cls) for cls in instance.tasks_by_period)
    return ReducedProblem(LOWER_MERGED, items, derive_period_structure(instance),
                          unbounded_copy(instance))


def analytic_lower_bound(instance: Instance) -> int:
    """max(average row load ignoring headers, largest load some row must carry).

    Every row holds all groups of the shortest period, hence at least one
    header plus their payload; some row holds the largest task with a header.
    """
    if not instance.tasks:
        return 0
    ps = derive_period_structure(instance)
    hs = instance.header_size
    mass = sum(t.proc * (ps.row_count // ps.interval_counts[instance.period_index[t.period]])
               for t in instance.tasks if t.period in instance.period_index)
    average = -(-mass // ps.row_count)
    base = instance.tasks_by_period[0]
    mandatory = max(hs + t.proc for t in instance.tasks)
    if base:
        mandatory = max(mandatory, hs + sum(t.proc for t in base))
    return max(average, mandatory)


def solve_reduced(problem: ReducedProblem, limits: SolveLimits | None = None,
                  ls_iterations: int = 200) -> ReducedResult:
    """Exact branch-and-bound warm-started from a heuristic; the optimal flag is
    false when the budget runs out."""
    inst = problem.instance
    if problem.kind == UPPER_SINGLETON:
        start = construct_greedy(inst, "singleton")
        cfg = LocalSearchConfig(iterations=ls_iterations, task_move=False, task_swap=False,
                                merge_split=False)
        start = local_search(inst, start, cfg)
        mode = SINGLETON
    elif problem.kind == LOWER_MERGED:
        start = local_search(inst, construct_greedy(inst, "ffd"),
                             LocalSearchConfig(iterations=ls_iterations))
        start = merge_same_interval(inst, start)
        mode = MERGED
    else:
        raise ValueError(f"unknown reduced problem kind {problem.kind!r}")
    res = branch_and_bound(inst, mode, limits, incumbent=start,
                           lower_bound=analytic_lower_bound(inst))
    return ReducedResult(res.cmax, res.solution, res.optimal)


def compute_bounds(instance: Instance, limits: SolveLimits | None = None) -> BoundsReport:
    up = solve_reduced(upper_bound_problem(instance), limits)
    lo = solve_reduced(lower_bound_problem(instance), limits)
    return BoundsReport(lo.value, up.value, analytic_lower_bound(instance),
                        lo.optimal, up.optimal, {"solver": "branch_and_bound"})
