"""Command line interface.

Exit codes: 0 success, 1 invalid input or failed validation, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import benchmark
from .bounds import compute_bounds
from .exact import SearchSpaceTooLarge
from .instance import (GeneratorParams, InstanceFormatError, derive_period_structure,
                       generate_instance, parse_instance, serialize_instance, validate)
from .methods import METHODS, run_method
from .milp import export_lp, model_statistics
from .render import RenderSpec, render_gantt
from .schedule import (InvalidSolutionError, evaluate, expand_start_times, parse_solution,
                       serialize_solution)
from .search import SolveLimits

log = logging.getLogger("tt_grouper")


class InputError(Exception):
    pass


def _read_instance(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _read_valid_instance(path: str):
    inst = _read_instance(path)
    report = validate(inst)
    if not report.ok:
        raise InputError(str(report))
    return inst


def _write(out: str | None, text: str):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _limits(args) -> SolveLimits:
    return SolveLimits(time_limit=args.time_limit, node_limit=args.node_limit,
                       target_cmax=getattr(args, "target", None))


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_generate(args):
    params = GeneratorParams(
        n_tasks=args.tasks, n_periods=args.periods, base_period=args.base_period,
        multiplier_choices=tuple(_ints(args.multipliers)),
        proc_range=(args.proc_min, args.proc_max),
        header_size=args.hs, max_group_size=args.smax)
    try:
        inst = generate_instance(params, args.seed)
    except ValueError as e:
        raise InputError(str(e)) from None
    _write(args.output, serialize_instance(inst))


def cmd_validate(args):
    inst = _read_instance(args.instance)
    report = validate(inst)
    for v in report.violations:
        print(f"{v.severity} {v.code}: {v.message}", file=sys.stderr)
    if not report.ok:
        return 1
    ps = derive_period_structure(inst)
    print(f"ok tasks {len(inst.tasks)} periods {len(inst.periods)} rows {ps.row_count}")
    return 0


def cmd_solve(args):
    inst = _read_valid_instance(args.instance)
    res = run_method(inst, args.method, _limits(args), seed=args.seed,
                     ls_iterations=args.iterations)
    print(f"cmax {res.cmax}")
    print(f"optimal {str(res.optimal).lower()}")
    if args.method != "lb":
        ev = evaluate(inst, res.solution)
        print(f"feasible {str(ev.feasible).lower()} margin {ev.margin}")
    if args.output:
        _write(args.output, serialize_solution(res.solution, res.cmax))


def cmd_evaluate(args):
    inst = _read_valid_instance(args.instance)
    sol, _ = parse_solution(Path(args.solution).read_text())
    ev = evaluate(inst, sol)
    print(f"cmax {ev.cmax}")
    print(f"feasible {str(ev.feasible).lower()} margin {ev.margin}")
    print("rows " + " ".join(map(str, ev.row_totals)))
    for u, loads in enumerate(ev.period_loads):
        print(f"period {inst.periods[u]} loads " + " ".join(map(str, loads)))


def cmd_bounds(args):
    inst = _read_valid_instance(args.instance)
    b = compute_bounds(inst, _limits(args))
    print(f"analytic_lower {b.analytic_lower}")
    print(f"lower {b.lower} optimal {str(b.lower_optimal).lower()}")
    print(f"upper {b.upper} optimal {str(b.upper_optimal).lower()}")


def cmd_export_lp(args):
    inst = _read_valid_instance(args.instance)
    text = export_lp(inst, literal_bigm=args.literal_bigm)
    _write(args.output, text)
    if args.stats:
        st = model_statistics(inst, literal_bigm=args.literal_bigm)
        vars_ = " ".join(f"{k}={v}" for k, v in st.variables().items())
        cons = " ".join(f"{k}={v}" for k, v in st.constraints.items())
        print(f"variables {vars_}\nconstraints {cons}", file=sys.stderr)


def cmd_render(args):
    inst = _read_valid_instance(args.instance)
    if args.solution:
        sol, _ = parse_solution(Path(args.solution).read_text())
    else:
        sol = run_method(inst, args.method, _limits(args), seed=args.seed).solution
    tl = expand_start_times(inst, sol)
    spec = RenderSpec(kind=args.kind, scale=args.scale, row_height=args.row_height,
                      color_by=args.color_by, show_headers=not args.no_headers,
                      quantum=args.quantum)
    _write(args.output, render_gantt(tl, inst, spec, solution=sol))


def cmd_bench(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    limits = _limits(args)
    if args.time_limit is None and args.node_limit is None:
        limits = SolveLimits(time_limit=60.0)
    if args.sweep:
        inst = _read_instance(args.sweep)
        cells = benchmark.sweep(inst, _ints(args.hs), _ints(args.smax), args.method, limits)
        (out / "sweep.csv").write_text(benchmark.sweep_csv(cells))
        return
    if not args.manifest:
        raise InputError("bench needs a manifest or --sweep INSTANCE")
    entries, spec = benchmark.load_manifest(args.manifest)
    methods = args.methods.split(",") if args.methods else spec.get("methods", ["greedy", "local"])
    if "limits" in spec and args.time_limit is None and args.node_limit is None:
        limits = SolveLimits(**spec["limits"])
    records = benchmark.run_suite(entries, methods, limits, args.workers)
    for path in args.import_records or []:
        records += benchmark.read_records_csv(Path(path).read_text())
    (out / "records.csv").write_text(benchmark.records_csv(records, timings=args.timings))
    table = benchmark.compare(records)
    (out / "table.csv").write_text(benchmark.table_csv(table))
    sys.stdout.write(benchmark.table_csv(table))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tt-grouper",
                                description="Group periodic signals into messages and schedule them.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def limits(sp, time_default=60.0):
        sp.add_argument("--time-limit", type=float, default=time_default, help="seconds")
        sp.add_argument("--node-limit", type=int, default=None)

    g = sub.add_parser("generate", help="write a random instance")
    g.add_argument("--tasks", type=int, default=50)
    g.add_argument("--periods", type=int, default=4)
    g.add_argument("--base-period", type=int, default=4000)
    g.add_argument("--multipliers", default="2", help="comma separated subset of 2,3,4")
    g.add_argument("--proc-min", type=int, default=8)
    g.add_argument("--proc-max", type=int, default=120)
    g.add_argument("--hs", type=int, default=90)
    g.add_argument("--smax", type=int, default=600)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="check an instance file")
    v.add_argument("instance")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("instance")
    s.add_argument("--method", choices=METHODS, default="local")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--iterations", type=int, default=500, help="local search iterations")
    s.add_argument("--target", type=int, default=None, help="stop once this Cmax is reached")
    limits(s)
    s.add_argument("-o", "--output", help="write the solution file here")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("evaluate", help="evaluate a solution file")
    e.add_argument("instance")
    e.add_argument("solution")
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("bounds", help="upper/lower bound models")
    b.add_argument("instance")
    limits(b)
    b.set_defaults(func=cmd_bounds)

    x = sub.add_parser("export-lp", help="write the MILP model as an LP file")
    x.add_argument("instance")
    x.add_argument("-o", "--output")
    x.add_argument("--format", choices=["lp"], default="lp")
    x.add_argument("--literal-bigm", action="store_true",
                   help="use the task count (z-link) and T0 (c-link) as big-M constants")
    x.add_argument("--stats", action="store_true", help="print model statistics to stderr")
    x.set_defaults(func=cmd_export_lp)

    r = sub.add_parser("render", help="draw the stacked-interval schedule")
    r.add_argument("instance")
    r.add_argument("--solution", help="solution file; solved with --method when omitted")
    r.add_argument("--method", choices=METHODS, default="local")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--kind", choices=["svg", "text"], default="svg")
    r.add_argument("--scale", type=float, default=None)
    r.add_argument("--row-height", type=int, default=24)
    r.add_argument("--color-by", choices=["period", "group"], default="period")
    r.add_argument("--no-headers", action="store_true")
    r.add_argument("--quantum", type=int, default=None)
    limits(r)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_render)

    n = sub.add_parser("bench", help="compare methods or sweep hs/Smax")
    n.add_argument("manifest", nargs="?")
    n.add_argument("--out", default="bench_out")
    n.add_argument("--methods", help="comma separated; overrides the manifest")
    n.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: $TT_GROUPER_WORKERS or 1)")
    n.add_argument("--import-records", action="append", help="extra records CSV (external solvers)")
    n.add_argument("--timings", action="store_true", help="include wall times in records.csv")
    n.add_argument("--sweep", metavar="INSTANCE", help="sweep hs x Smax on one instance")
    n.add_argument("--hs", default="0,30,60,90")
    n.add_argument("--smax", default="300,400,500,600")
    n.add_argument("--method", choices=METHODS, default="exact")
    n.add_argument("--time-limit", type=float, default=None)
    n.add_argument("--node-limit", type=int, default=None)
    n.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args) or 0
    except (InputError, InstanceFormatError, InvalidSolutionError, SearchSpaceTooLarge,
            FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
