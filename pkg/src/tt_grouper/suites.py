"""Seeded instance suites used by the tests, scripts and benchmarks."""
from __future__ import annotations

import random

from .exact import ORACLE_SPACE_LIMIT, oracle_space
from .instance import GeneratorParams, Instance, TaskSpec, generate_instance, make_instance

HUGE_SMAX = 10 ** 6


def worked_instance_a() -> Instance:
    """Periods 4 and 8, hs=1, Smax=4; one task of 2 at period 4, two of 1 at period 8."""
    return make_instance([("t1", 4, 2), ("t2", 8, 1), ("t3", 8, 1)], [4, 8], 1, 4)


def micro_instance(seed: int, max_tasks: int = 8) -> Instance:
    """At most ``max_tasks`` tasks, at most two periods, proc <= 10, hs <= 3.

    Odd seeds get a tight max group size, even seeds an unlimited one. Tasks
    are dropped from the end until the oracle's enumeration guard holds.
    """
    rng = random.Random(seed)
    r = rng.randint(1, 2)
    base = rng.choice([10, 20, 30])
    periods = [base] if r == 1 else [base, base * rng.choice([2, 3, 4])]
    hs = rng.randint(0, 3)
    n = rng.randint(1, max_tasks)
    tasks = [TaskSpec(f"t{i + 1}", rng.choice(periods), rng.randint(1, 10)) for i in range(n)]
    pmax = max(t.proc for t in tasks)
    smax = hs + pmax + rng.randint(0, 8) if seed % 2 else HUGE_SMAX
    inst = Instance(tuple(tasks), tuple(periods), hs, smax)
    while oracle_space(inst) > ORACLE_SPACE_LIMIT:
        inst = inst.replace(tasks=inst.tasks[:-1])
    return inst


def micro_suite(count: int = 100, start: int = 0) -> list[Instance]:
    return [micro_instance(seed) for seed in range(start, start + count)]


def large_instance(seed: int) -> Instance:
    """50-600 tasks over 1-6 harmonic periods (multipliers 2-4)."""
    rng = random.Random(seed)
    params = GeneratorParams(
        n_tasks=rng.randint(50, 600),
        n_periods=rng.randint(1, 6),
        base_period=4000,
        multiplier_choices=(2, 3, 4),
        proc_range=(8, 120),
        header_size=rng.choice([0, 30, 60, 90]),
        max_group_size=rng.choice([300, 600, 1000]),
    )
    return generate_instance(params, seed)
