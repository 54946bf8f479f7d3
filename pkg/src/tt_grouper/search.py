"""Depth-first branch-and-bound over task placements.

One engine serves three grouping policies:

``full``
    a task joins an existing group of its period (if the size cap allows) or
    opens a new group in some interval;
``singleton``
    every task opens its own group (upper-bound model);
``merged``
    at most one group per period and interval, no size cap (lower-bound model).

Groups are labelled in creation order, so every set partition is generated
exactly once. Interval choices are reduced by the cyclic row symmetry: shifting
every first-occurrence interval by a constant (mod the interval count of each
period) maps solutions to solutions with identical Cmax. With ``L`` the largest
interval count among periods that already hold a group, a new group of a
period with more than ``L`` intervals only needs intervals ``0..L-1``.
"""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field

from .instance import Instance, derive_period_structure
from .schedule import Solution, period_loads

FULL = "full"
SINGLETON = "singleton"
MERGED = "merged"
MODES = (FULL, SINGLETON, MERGED)


@dataclass
class SolveLimits:
    time_limit: float | None = 300.0
    node_limit: int | None = None
    target_cmax: int | None = None

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")


@dataclass
class SolveResult:
    solution: Solution
    cmax: int
    optimal: bool
    nodes: int = 0
    wall_time: float = field(default=0.0, compare=False)


def solution_cmax(instance: Instance, solution: Solution) -> int:
    """Cmax without validity checks (also used for relaxed solutions)."""
    loads = period_loads(instance, solution)
    rows = derive_period_structure(instance).row_count
    return max((sum(p[k % len(p)] for p in loads) for k in range(rows)), default=0)


class _Budget(Exception):
    pass


def branch_and_bound(instance: Instance, mode: str = FULL, limits: SolveLimits | None = None,
                     incumbent: Solution | None = None, lower_bound: int = 0) -> SolveResult:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    limits = limits or SolveLimits()
    t_start = time.perf_counter()
    ps = derive_period_structure(instance)
    R, counts = ps.row_count, ps.interval_counts
    hs = instance.header_size
    cap = instance.max_group_size if mode == FULL else math.inf
    classes = instance.tasks_by_period
    r = len(counts)

    # periods by descending row mass, tasks by descending proc (stable)
    def pressure(u):
        cls = classes[u]
        return (sum(t.proc for t in cls) + (hs if cls else 0)) * (R // counts[u])

    period_order = sorted(range(r), key=lambda u: (-pressure(u), u))
    seq = []
    for u in period_order:
        for t in sorted(classes[u], key=lambda t: -t.proc):
            seq.append((t.id, u, t.proc))
    n = len(seq)

    per_task_hdr = hs if mode == SINGLETON else 0
    rem_mass = [0] * (n + 1)
    for pos in range(n - 1, -1, -1):
        _, u, p = seq[pos]
        rem_mass[pos] = rem_mass[pos + 1] + (p + per_task_hdr) * (R // counts[u])
    # remaining payload of a period from position pos onwards (contiguous blocks)
    block_end = {}
    for pos, (_, u, _) in enumerate(seq):
        block_end[u] = pos + 1
    rem_payload = [0] * (n + 1)
    for pos in range(n - 1, -1, -1):
        _, u, p = seq[pos]
        rem_payload[pos] = p + (rem_payload[pos + 1] if pos + 1 < block_end[u] else 0)
    block_start = {}
    for pos in range(n - 1, -1, -1):
        block_start[seq[pos][1]] = pos

    rows = [0] * R
    groups: list[list[list]] = [[] for _ in range(r)]   # [interval, size, members]
    state = {"mass": 0, "nodes": 0}

    best_cmax = math.inf
    best_groups = None
    if incumbent is not None:
        best_cmax = solution_cmax(instance, incumbent)
    deadline = None if limits.time_limit is None else t_start + limits.time_limit
    target = limits.target_cmax
    exhausted = True

    def add(u, k, a):
        m = counts[u]
        for i in range(k, R, m):
            rows[i] += a
        state["mass"] += a * (R // m)

    def col_max(u, k):
        return max(rows[k::counts[u]])

    def bound(pos):
        lb = max(rows)
        if pos == n:
            return lb
        need_hdr = 0
        for u in range(r):
            if u in block_start and block_end[u] > pos and not groups[u]:
                need_hdr += hs * (R // counts[u])
        lb = max(lb, -(-(state["mass"] + rem_mass[pos] + need_hdr) // R))
        for u in range(r):
            if u not in block_start or block_end[u] <= pos:
                continue
            first = max(pos, block_start[u])
            pmax = seq[first][2]
            payload = rem_payload[first]
            m = counts[u]
            cols = sorted(col_max(u, k) for k in range(m))
            if mode == SINGLETON or not groups[u]:
                extra = hs
            elif mode == FULL:
                extra = 0 if any(g[1] + pmax <= cap for g in groups[u]) else hs
            else:
                extra = 0
            lb = max(lb, cols[0] + pmax + extra)
            # water-filling of the remaining payload over the columns
            filled, level = 0, cols[-1]
            for w in range(1, m + 1):
                filled += cols[w - 1]
                lvl = -(-(payload + filled) // w)
                if w == m or lvl <= cols[w]:
                    level = lvl
                    break
            lb = max(lb, level)
        return lb

    def snapshot():
        return [[(g[0], g[1], list(g[2])) for g in gs] for gs in groups]

    def dfs(pos, sym_level):
        nonlocal best_cmax, best_groups
        state["nodes"] += 1
        if limits.node_limit is not None and state["nodes"] > limits.node_limit:
            raise _Budget
        if deadline is not None and state["nodes"] % 256 == 0 and time.perf_counter() > deadline:
            raise _Budget
        if pos == n:
            c = max(rows)
            if c < best_cmax:
                best_cmax = c
                best_groups = snapshot()
            return
        if bound(pos) >= best_cmax:
            return
        tid, u, p = seq[pos]
        m = counts[u]
        options = []
        if mode != SINGLETON:
            seen = set()
            for gi, g in enumerate(groups[u]):
                if g[1] + p > cap or (g[0], g[1]) in seen:
                    continue
                seen.add((g[0], g[1]))
                options.append((col_max(u, g[0]) + p, 0, g[0], gi))
        used = {g[0] for g in groups[u]} if mode == MERGED else ()
        ks = range(sym_level) if m > sym_level else range(m)
        for k in ks:
            if k in used:
                continue
            options.append((col_max(u, k) + p + hs, 1, k, -1))
        options.sort()
        for _, is_new, k, gi in options:
            if is_new:
                groups[u].append([k, hs + p, [tid]])
                add(u, k, hs + p)
                dfs(pos + 1, max(sym_level, m))
                add(u, k, -(hs + p))
                groups[u].pop()
            else:
                g = groups[u][gi]
                g[1] += p
                g[2].append(tid)
                add(u, k, p)
                dfs(pos + 1, sym_level)
                add(u, k, -p)
                g[2].pop()
                g[1] -= p
            if best_cmax <= lower_bound or (target is not None and best_cmax <= target):
                return

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 2 * n + 1000))
    try:
        if not (best_cmax <= lower_bound or (target is not None and best_cmax <= target)):
            dfs(0, 1)
    except _Budget:
        exhausted = False
    finally:
        sys.setrecursionlimit(old_limit)

    if best_groups is not None:
        solution = Solution.from_groups(
            (u, members, k) for u in range(r) for k, _, members in best_groups[u])
        best = int(best_cmax)
    elif incumbent is not None:
        solution, best = incumbent, int(best_cmax)
    else:
        # budget ran out before the first leaf
        solution, best = None, None
    hit_target = target is not None and best is not None and best <= target
    optimal = best is not None and (best <= lower_bound or (exhausted and not hit_target))
    return SolveResult(solution, best, bool(optimal), state["nodes"],
                       time.perf_counter() - t_start)
