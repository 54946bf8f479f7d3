"""Uniform entry point over all solution methods (used by the CLI and bench)."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .bounds import (analytic_lower_bound, lower_bound_problem, solve_reduced,
                     upper_bound_problem)
from .exact import brute_force_oracle, solve_exact
from .heuristic import LocalSearchConfig, construct_greedy, local_search
from .instance import Instance
from .schedule import Solution, evaluate
from .search import SolveLimits

METHODS = ("exact", "oracle", "greedy", "local", "ub", "lb")


@dataclass
class MethodResult:
    method: str
    solution: Solution
    cmax: int
    optimal: bool
    # the instance the solution is valid for (lb drops the group size cap)
    instance: Instance
    wall_time: float = 0.0


def run_method(instance: Instance, method: str, limits: SolveLimits | None = None,
               seed: int = 0, ls_iterations: int = 500) -> MethodResult:
    t0 = time.perf_counter()
    target = instance
    if method == "exact":
        res = solve_exact(instance, limits)
        sol, cmax, opt = res.solution, res.cmax, res.optimal
    elif method == "oracle":
        res = brute_force_oracle(instance)
        sol, cmax, opt = res.solution, res.cmax, True
    elif method in ("greedy", "local"):
        sol = construct_greedy(instance)
        if method == "local":
            sol = local_search(instance, sol, LocalSearchConfig(iterations=ls_iterations, seed=seed))
        cmax = evaluate(instance, sol).cmax
        opt = cmax <= analytic_lower_bound(instance)
    elif method in ("ub", "lb"):
        problem = upper_bound_problem(instance) if method == "ub" else lower_bound_problem(instance)
        value, sol, opt = solve_reduced(problem, limits, ls_iterations=min(ls_iterations, 200))
        cmax, target = value, problem.instance
    else:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return MethodResult(method, sol, cmax, bool(opt), target, time.perf_counter() - t0)
