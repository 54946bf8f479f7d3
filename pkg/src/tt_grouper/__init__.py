"""Grouping of periodic time-triggered signals into messages and scheduling of
the messages on a single resource with harmonic periods (objective: Cmax)."""
from .instance import (GeneratorParams, Instance, PeriodStructure, TaskSpec, ValidationReport,
                       derive_period_structure, generate_instance, parse_instance,
                       serialize_instance, validate)
from .schedule import (Evaluation, GroupRecord, ScheduleTimeline, Solution, check_solution,
                       evaluate, expand_start_times, group_size, timeline_consistency)
from .search import SolveLimits, SolveResult
from .exact import brute_force_oracle, solve_exact
from .heuristic import LocalSearchConfig, construct_greedy, local_search
from .bounds import analytic_lower_bound, compute_bounds

__version__ = "0.1.0"
