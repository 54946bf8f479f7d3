"""Greedy construction and steepest-descent local search.

Every move changes the load of at most two intervals of a single period. For
period ``u`` with ``m`` intervals the row totals reshape into a
``(rows/m, m)`` matrix whose column ``k`` holds exactly the rows touched by
interval ``k``, so the effect of a move on Cmax and on the sum of squared row
totals follows from per-column max, sum and sum of squares.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .instance import Instance, TaskSpec, derive_period_structure
from .schedule import Solution


@dataclass
class LocalSearchConfig:
    iterations: int = 500
    task_move: bool = True
    task_swap: bool = True
    group_move: bool = True
    merge_split: bool = True
    seed: int = 0
    # relocation targets per move: the this-many least loaded intervals
    candidate_intervals: int = 4

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.candidate_intervals < 1:
            raise ValueError("candidate_intervals must be >= 1")


def ffd_groups(tasks: list[TaskSpec], header: int, max_size: float) -> list[list[TaskSpec]]:
    """First-fit decreasing packing of one period class."""
    order = sorted(range(len(tasks)), key=lambda i: (-tasks[i].proc, i))
    bins: list[list[TaskSpec]] = []
    sizes: list[int] = []
    for i in order:
        t = tasks[i]
        for b, s in enumerate(sizes):
            if s + t.proc <= max_size:
                bins[b].append(t)
                sizes[b] += t.proc
                break
        else:
            bins.append([t])
            sizes.append(header + t.proc)
    return bins


def assign_intervals(instance: Instance, grouping: list[list[list[TaskSpec]]]) -> Solution:
    """Place groups in descending size order, each into the interval whose
    rows would have the smallest resulting maximum."""
    ps = derive_period_structure(instance)
    hs = instance.header_size
    rows = np.zeros(ps.row_count, dtype=np.int64)
    items = []
    for u, groups in enumerate(grouping):
        for j, g in enumerate(groups):
            if g:
                items.append((hs + sum(t.proc for t in g), u, j))
    items.sort(key=lambda it: (-it[0], it[1], it[2]))
    where = {}
    for size, u, j in items:
        m = ps.interval_counts[u]
        colmax = rows.reshape(-1, m).max(axis=0)
        k = int(np.argmin(colmax))
        rows[k::m] += size
        where[(u, j)] = k
    return Solution.from_groups(
        (u, [t.id for t in g], where[(u, j)])
        for u, groups in enumerate(grouping) for j, g in enumerate(groups) if g)


def construct_greedy(instance: Instance, policy: str = "ffd") -> Solution:
    """``policy`` is ``ffd`` (capacity = max group size), ``singleton`` or
    ``unbounded`` (ffd without a cap, one group per period)."""
    hs = instance.header_size
    grouping = []
    for cls in instance.tasks_by_period:
        if policy == "singleton":
            grouping.append([[t] for t in cls])
        elif policy == "unbounded":
            grouping.append([list(cls)] if cls else [])
        elif policy == "ffd":
            grouping.append(ffd_groups(list(cls), hs, instance.max_group_size))
        else:
            raise ValueError(f"unknown policy {policy!r}")
    return assign_intervals(instance, grouping)


class _Group:
    __slots__ = ("u", "k", "members", "size")

    def __init__(self, u, k, members, size):
        self.u, self.k, self.members, self.size = u, k, members, size


class _State:
    def __init__(self, instance: Instance, solution: Solution):
        ps = derive_period_structure(instance)
        self.instance = instance
        self.counts = ps.interval_counts
        self.R = ps.row_count
        self.hs = instance.header_size
        self.cap = instance.max_group_size
        self.proc = {t.id: t.proc for t in instance.tasks}
        self.rows = np.zeros(self.R, dtype=np.int64)
        self.groups: list[list[_Group]] = [[] for _ in self.counts]
        for g in sorted(solution.nonempty(), key=lambda g: g.key):
            size = self.hs + sum(self.proc[m] for m in g.members)
            grp = _Group(g.period_index, solution.assignment[g.key], list(g.members), size)
            self.groups[g.period_index].append(grp)
            self._place(grp, 1)

    def _place(self, g: _Group, sign: int):
        self.rows[g.k::self.counts[g.u]] += sign * g.size

    def objective(self) -> tuple[int, int]:
        return int(self.rows.max(initial=0)), int((self.rows * self.rows).sum())

    def to_solution(self) -> Solution:
        return Solution.from_groups(
            (u, g.members, g.k) for u, gs in enumerate(self.groups) for g in gs)


class _Columns:
    """Per-column statistics of the row totals for one period."""

    def __init__(self, rows: np.ndarray, m: int, total_sq: int):
        mat = rows.reshape(-1, m)
        self.c = mat.shape[0]
        self.max = mat.max(axis=0).tolist()
        self.sum = mat.sum(axis=0).tolist()
        self.top = sorted(range(m), key=lambda k: (-self.max[k], k))[:3]
        self.low = sorted(range(m), key=lambda k: (self.max[k], k))
        self.total_sq = total_sq

    def others(self, a: int, b: int) -> int:
        for k in self.top:
            if k != a and k != b:
                return self.max[k]
        return -1

    def shift(self, kf: int, out: int, kt: int, inc: int) -> tuple[int, int]:
        """Objective after removing ``out`` from every row of column ``kf`` and
        adding ``inc`` to every row of column ``kt``."""
        c = self.c
        if kf == kt:
            d = inc - out
            cm = max(self.others(kf, kf), self.max[kf] + d)
            sq = self.total_sq + 2 * d * self.sum[kf] + c * d * d
            return cm, sq
        cm = max(self.others(kf, kt), self.max[kf] - out, self.max[kt] + inc)
        sq = (self.total_sq - 2 * out * self.sum[kf] + c * out * out
              + 2 * inc * self.sum[kt] + c * inc * inc)
        return cm, sq


def _moves(st: _State, u: int, cols: _Columns, cfg: LocalSearchConfig, order: list[int]):
    """Yield (objective, move) for every enabled move of period ``u``."""
    groups = st.groups[u]
    hs, cap, proc = st.hs, st.cap, st.proc
    targets = cols.low[:cfg.candidate_intervals]
    for gi in order:
        if gi >= len(groups):
            continue
        g = groups[gi]
        single = len(g.members) == 1
        if cfg.group_move:
            for kt in targets:
                if kt != g.k:
                    yield cols.shift(g.k, g.size, kt, g.size), ("gmove", g, kt)
        for hi, h in enumerate(groups):
            if h is g:
                continue
            if cfg.merge_split and g.size + h.size - hs <= cap:
                yield cols.shift(g.k, g.size, h.k, g.size - hs), ("merge", g, h)
            if cfg.task_move:
                for t in g.members:
                    p = proc[t]
                    if h.size + p > cap or (h.k == g.k and not single):
                        continue
                    yield cols.shift(g.k, g.size if single else p, h.k, p), ("tmove", t, g, h)
            if cfg.task_swap and h.k != g.k and hi > gi:
                for t in g.members:
                    for s in h.members:
                        d = proc[t] - proc[s]
                        if d == 0 or g.size - d > cap or h.size + d > cap:
                            continue
                        yield cols.shift(g.k, d, h.k, d), ("swap", t, g, s, h)
        if cfg.merge_split and not single:
            for t in g.members:
                p = proc[t]
                for kt in targets:
                    yield cols.shift(g.k, p, kt, p + hs), ("split", t, g, kt)


def _apply(st: _State, move):
    kind = move[0]
    hs, proc = st.hs, st.proc
    if kind == "gmove":
        _, g, kt = move
        st._place(g, -1)
        g.k = kt
        st._place(g, 1)
    elif kind == "merge":
        _, g, h = move
        st._place(g, -1)
        st._place(h, -1)
        h.members.extend(g.members)
        h.size += g.size - hs
        st.groups[g.u].remove(g)
        st._place(h, 1)
    elif kind == "tmove":
        _, t, g, h = move
        st._place(g, -1)
        st._place(h, -1)
        g.members.remove(t)
        h.members.append(t)
        g.size -= proc[t]
        h.size += proc[t]
        if not g.members:
            st.groups[g.u].remove(g)
        else:
            st._place(g, 1)
        st._place(h, 1)
    elif kind == "swap":
        _, t, g, s, h = move
        st._place(g, -1)
        st._place(h, -1)
        g.members[g.members.index(t)] = s
        h.members[h.members.index(s)] = t
        d = proc[t] - proc[s]
        g.size -= d
        h.size += d
        st._place(g, 1)
        st._place(h, 1)
    elif kind == "split":
        _, t, g, kt = move
        st._place(g, -1)
        g.members.remove(t)
        g.size -= proc[t]
        st._place(g, 1)
        new = _Group(g.u, kt, [t], hs + proc[t])
        st.groups[g.u].append(new)
        st._place(new, 1)
    else:
        raise AssertionError(kind)


def local_search(instance: Instance, start: Solution, config: LocalSearchConfig | None = None) -> Solution:
    """Steepest descent on (Cmax, sum of squared row totals). Only strictly
    improving moves are taken, so the result is never worse than ``start``."""
    cfg = config or LocalSearchConfig()
    if cfg.iterations == 0:
        return start
    st = _State(instance, start)
    rng = random.Random(cfg.seed)
    current = st.objective()
    for _ in range(cfg.iterations):
        total_sq = current[1]
        best, best_move = current, None
        for u, gs in enumerate(st.groups):
            if not gs:
                continue
            cols = _Columns(st.rows, st.counts[u], total_sq)
            order = list(range(len(gs)))
            rng.shuffle(order)
            for obj, move in _moves(st, u, cols, cfg, order):
                if obj < best:
                    best, best_move = obj, move
        if best_move is None:
            break
        _apply(st, best_move)
        current = st.objective()
        assert current == best, (current, best, best_move[0])
    return st.to_solution()


def solve_heuristic(instance: Instance, config: LocalSearchConfig | None = None) -> Solution:
    return local_search(instance, construct_greedy(instance), config)


def merge_same_interval(instance: Instance, solution: Solution) -> Solution:
    """Collapse all groups of one period sharing an interval (ignores the cap)."""
    buckets: dict[tuple[int, int], list[str]] = {}
    for g in sorted(solution.nonempty(), key=lambda g: g.key):
        buckets.setdefault((g.period_index, solution.assignment[g.key]), []).extend(g.members)
    return Solution.from_groups((u, mem, k) for (u, k), mem in sorted(buckets.items()))


def unbounded_copy(instance: Instance) -> Instance:
    """Same instance with an effectively unlimited group size."""
    total = sum(t.proc for t in instance.tasks)
    return instance.replace(max_group_size=max(instance.max_group_size,
                                               instance.header_size + total, 1))

