"""Problem instances: tasks with harmonic periods, a per-message header and a
maximum message size.

Time is integral everywhere. Periods are kept sorted ascending; task order is
whatever the input used and is treated as the stable task index.
"""
from __future__ import annotations

import io
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, TextIO


ERROR = "error"
WARNING = "warning"


class InstanceFormatError(ValueError):
    """Raised by :func:`parse_instance` on malformed input."""

    def __init__(self, code: str, message: str, line: int | None = None):
        self.code = code
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{code}: {where}{message}")


@dataclass(frozen=True)
class TaskSpec:
    id: str
    period: int
    proc: int

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"task {self.id}: period must be >= 1, got {self.period}")
        if self.proc < 1:
            raise ValueError(f"task {self.id}: proc must be >= 1, got {self.proc}")


@dataclass(frozen=True)
class Instance:
    tasks: tuple[TaskSpec, ...]
    periods: tuple[int, ...]
    header_size: int
    max_group_size: int

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        periods = tuple(sorted(self.periods))
        if not periods:
            raise ValueError("an instance needs at least one period")
        if any(p < 1 for p in periods):
            raise ValueError(f"periods must be positive: {periods}")
        if len(set(periods)) != len(periods):
            raise ValueError(f"duplicate periods: {periods}")
        object.__setattr__(self, "periods", periods)
        if self.header_size < 0:
            raise ValueError("header_size must be >= 0")
        if self.max_group_size < 1:
            raise ValueError("max_group_size must be >= 1")

    @property
    def base_period(self) -> int:
        return self.periods[0]

    @property
    def hyperperiod(self) -> int:
        return self.periods[-1]

    @cached_property
    def task_by_id(self) -> dict[str, TaskSpec]:
        return {t.id: t for t in self.tasks}

    @cached_property
    def period_index(self) -> dict[int, int]:
        return {p: u for u, p in enumerate(self.periods)}

    @cached_property
    def tasks_by_period(self) -> tuple[tuple[TaskSpec, ...], ...]:
        """Task classes, one per period, in input order (tasks with an unknown
        period are dropped here; :func:`validate` reports them)."""
        classes: list[list[TaskSpec]] = [[] for _ in self.periods]
        for t in self.tasks:
            u = self.period_index.get(t.period)
            if u is not None:
                classes[u].append(t)
        return tuple(tuple(c) for c in classes)

    def replace(self, **changes) -> "Instance":
        fields = dict(tasks=self.tasks, periods=self.periods,
                      header_size=self.header_size,
                      max_group_size=self.max_group_size)
        fields.update(changes)
        return Instance(**fields)


@dataclass(frozen=True)
class PeriodStructure:
    periods: tuple[int, ...]
    multipliers: tuple[int, ...]
    interval_counts: tuple[int, ...]
    row_count: int
    hyperperiod: int

    @property
    def base_period(self) -> int:
        return self.periods[0]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    severity: str = ERROR


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not any(v.severity == ERROR for v in self.violations)

    @property
    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == ERROR]

    def __str__(self):
        if not self.violations:
            return "ok"
        return "\n".join(f"{v.severity} {v.code}: {v.message}" for v in self.violations)


def validate(instance: Instance) -> ValidationReport:
    out: list[Violation] = []
    ps = instance.periods
    for a, b in zip(ps, ps[1:]):
        if b % a:
            out.append(Violation("NON_HARMONIC", f"period {b} is not a multiple of {a}"))
    seen: set[str] = set()
    hs, smax = instance.header_size, instance.max_group_size
    for t in instance.tasks:
        if t.id in seen:
            out.append(Violation("DUPLICATE_ID", f"task id {t.id!r} appears more than once"))
        seen.add(t.id)
        if t.period not in instance.period_index:
            out.append(Violation("BAD_PERIOD_REF", f"task {t.id}: period {t.period} not in {list(ps)}"))
        if hs + t.proc > smax:
            out.append(Violation("TASK_TOO_LARGE",
                                 f"task {t.id}: header {hs} + proc {t.proc} exceeds max group size {smax}"))
    for p, cls in zip(ps, instance.tasks_by_period):
        if not cls:
            out.append(Violation("EMPTY_PERIOD_CLASS", f"no tasks with period {p}", WARNING))
    return ValidationReport(tuple(out))


def derive_period_structure(instance: Instance) -> PeriodStructure:
    ps = instance.periods
    mult = []
    for a, b in zip(ps, ps[1:]):
        if b % a:
            raise ValueError(f"non-harmonic periods: {b} is not a multiple of {a}")
        mult.append(b // a)
    counts = tuple(p // ps[0] for p in ps)
    return PeriodStructure(ps, tuple(mult), counts, counts[-1], ps[-1])


# -- text format -------------------------------------------------------------

_HEADER_KEYS = ("hs", "smax", "periods")


def _int(tok: str, lineno: int, what: str, minimum: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise InstanceFormatError("BAD_VALUE", f"{what} is not an integer: {tok!r}", lineno) from None
    if v < minimum:
        raise InstanceFormatError("BAD_VALUE", f"{what} must be >= {minimum}, got {v}", lineno)
    return v


def parse_instance(text: str | TextIO) -> Instance:
    """Parse the line-oriented instance format. Does not call :func:`validate`."""
    if not isinstance(text, str):
        text = text.read()
    header: dict[str, object] = {}
    tasks: list[TaskSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key in _HEADER_KEYS:
            if key in header:
                raise InstanceFormatError("DUPLICATE_FIELD", f"{key!r} given twice", lineno)
            if key == "periods":
                if not rest:
                    raise InstanceFormatError("SYNTAX", "periods needs at least one value", lineno)
                vals = [_int(t, lineno, "period", 1) for t in rest]
                if any(b <= a for a, b in zip(vals, vals[1:])):
                    raise InstanceFormatError("BAD_VALUE", "periods must be strictly ascending", lineno)
                header[key] = tuple(vals)
            else:
                if len(rest) != 1:
                    raise InstanceFormatError("SYNTAX", f"{key} takes exactly one value", lineno)
                header[key] = _int(rest[0], lineno, key, 0 if key == "hs" else 1)
        elif key == "task":
            if len(rest) != 3:
                raise InstanceFormatError("SYNTAX", "expected 'task <id> <period> <proc>'", lineno)
            tid, per, proc = rest
            tasks.append(TaskSpec(tid, _int(per, lineno, "period", 1), _int(proc, lineno, "proc", 1)))
        else:
            raise InstanceFormatError("UNKNOWN_KEYWORD", f"unknown keyword {key!r}", lineno)
    for key in _HEADER_KEYS:
        if key not in header:
            raise InstanceFormatError("MISSING_FIELD", f"missing {key!r} line")
    return Instance(tuple(tasks), header["periods"], header["hs"], header["smax"])


def serialize_instance(instance: Instance) -> str:
    buf = io.StringIO()
    buf.write(f"hs {instance.header_size}\n")
    buf.write(f"smax {instance.max_group_size}\n")
    buf.write("periods " + " ".join(map(str, instance.periods)) + "\n")
    for t in instance.tasks:
        buf.write(f"task {t.id} {t.period} {t.proc}\n")
    return buf.getvalue()


# -- generator ---------------------------------------------------------------

@dataclass
class GeneratorParams:
    n_tasks: int = 50
    n_periods: int = 4
    base_period: int = 4000
    multiplier_choices: tuple[int, ...] = (2,)
    proc_range: tuple[int, int] = (8, 120)
    header_size: int = 90
    max_group_size: int = 600
    # relative weight of each period class; None means uniform
    period_weights: Sequence[float] | None = None
    id_prefix: str = "t"

    def check(self):
        if not 1 <= self.n_tasks <= 10000:
            raise ValueError("n_tasks must be in [1, 10000]")
        if not 1 <= self.n_periods <= 6:
            raise ValueError("n_periods must be in [1, 6]")
        if not self.multiplier_choices or not set(self.multiplier_choices) <= {2, 3, 4}:
            raise ValueError("multiplier_choices must be a nonempty subset of {2, 3, 4}")
        lo, hi = self.proc_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad proc_range {self.proc_range}")
        if lo + self.header_size > self.max_group_size:
            raise ValueError("unsatisfiable: smallest proc plus header exceeds max group size")
        if self.period_weights is not None:
            if len(self.period_weights) != self.n_periods or min(self.period_weights) < 0 \
                    or sum(self.period_weights) <= 0:
                raise ValueError("period_weights must be nonnegative, one per period")


def generate_instance(params: GeneratorParams, seed: int) -> Instance:
    params.check()
    rng = random.Random(seed)
    periods = [params.base_period]
    for _ in range(params.n_periods - 1):
        periods.append(periods[-1] * rng.choice(params.multiplier_choices))
    weights = params.period_weights or [1.0] * params.n_periods
    lo, hi = params.proc_range
    tasks = []
    for i in range(params.n_tasks):
        period = rng.choices(periods, weights=weights)[0]
        proc = rng.randint(lo, hi)
        while proc + params.header_size > params.max_group_size:
            proc = rng.randint(lo, hi)
        tasks.append(TaskSpec(f"{params.id_prefix}{i + 1}", period, proc))
    return Instance(tuple(tasks), tuple(periods), params.header_size, params.max_group_size)


def make_instance(tasks: Iterable[tuple[str, int, int]], periods: Sequence[int],
                  hs: int, smax: int) -> Instance:
    """Shorthand used by tests and scripts: ``tasks`` as (id, period, proc)."""
    return Instance(tuple(TaskSpec(*t) for t in tasks), tuple(periods), hs, smax)
