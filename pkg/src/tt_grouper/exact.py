"""Exact solvers: an exhaustive enumeration oracle for tiny instances and a
branch-and-bound search for everything else."""
from __future__ import annotations

import itertools
import time
from functools import lru_cache

from .bounds import analytic_lower_bound
from .heuristic import LocalSearchConfig, construct_greedy, local_search
from .instance import Instance, derive_period_structure
from .schedule import Solution
from .search import FULL, SolveLimits, SolveResult, branch_and_bound

ORACLE_SPACE_LIMIT = 10 ** 7


class SearchSpaceTooLarge(ValueError):
    code = "SPACE_TOO_LARGE"


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def oracle_space(instance: Instance) -> int:
    counts = derive_period_structure(instance).interval_counts
    size = 1
    for cls, m in zip(instance.tasks_by_period, counts):
        size *= bell(len(cls)) * m ** len(cls)
    return size


def set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def brute_force_oracle(instance: Instance, limit: int = ORACLE_SPACE_LIMIT) -> SolveResult:
    """Enumerate every partition of every period class and every interval
    choice for every group; return a true optimum."""
    space = oracle_space(instance)
    if space > limit:
        raise SearchSpaceTooLarge(f"SPACE_TOO_LARGE: {space} candidate solutions > {limit}")
    t0 = time.perf_counter()
    ps = derive_period_structure(instance)
    hs, smax = instance.header_size, instance.max_group_size
    # per period: distinct load vectors -> one witness (list of (members, interval))
    per_period: list[dict[tuple[int, ...], list]] = []
    for cls, m in zip(instance.tasks_by_period, ps.interval_counts):
        vectors: dict[tuple[int, ...], list] = {}
        for part in set_partitions(list(cls)):
            sizes = [hs + sum(t.proc for t in grp) for grp in part]
            if any(s > smax for s in sizes):
                continue
            for ks in itertools.product(range(m), repeat=len(part)):
                load = [0] * m
                for s, k in zip(sizes, ks):
                    load[k] += s
                vectors.setdefault(tuple(load), list(zip(part, ks)))
        per_period.append(vectors)
    best, witness, count = None, None, 0
    for combo in itertools.product(*(list(v.items()) for v in per_period)):
        count += 1
        cmax = max(sum(load[row % len(load)] for load, _ in combo) for row in range(ps.row_count))
        if best is None or cmax < best:
            best, witness = cmax, combo
    if witness is None:
        raise ValueError("no feasible grouping (a task does not fit any group)")
    solution = Solution.from_groups(
        (u, [t.id for t in grp], k)
        for u, (_, groups) in enumerate(witness) for grp, k in groups)
    return SolveResult(solution, best, True, count, time.perf_counter() - t0)


def solve_exact(instance: Instance, limits: SolveLimits | None = None,
                warm_start: Solution | None = None, ls_iterations: int = 200) -> SolveResult:
    """Branch-and-bound warm-started from greedy plus local search."""
    if warm_start is None:
        warm_start = local_search(instance, construct_greedy(instance),
                                  LocalSearchConfig(iterations=ls_iterations))
    return branch_and_bound(instance, FULL, limits, incumbent=warm_start,
                            lower_bound=analytic_lower_bound(instance))

