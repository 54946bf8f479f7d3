"""MILP model export in the CPLEX-style LP text format.

Variable names (``u`` period index, ``i`` task index inside its period class
in input order, ``j`` group slot, ``k`` interval; all 0-based)::

    x_u_i_j   task i of period u is in group j          binary
    z_u_j     group j of period u is nonempty            binary
    s_u_j     size of group j                            integer
    y_u_j_k   group j has its first occurrence in k      binary
    c_u_j_k   contribution of group j to interval k      integer
    p_u_k     load of period u in interval k             integer
    cmax      objective                                  integer

Constraint rows are named ``assign_u_i``, ``zlink_u_j``, ``size_u_j``,
``smax_u_j``, ``place_u_j``, ``cub_u_j_k`` (c <= s), ``cy_u_j_k``
(c <= M y), ``clb_u_j_k`` (c >= s - M (1 - y)), ``load_u_k`` and ``row_k``.
"""
from __future__ import annotations

import io
import logging
import re
from dataclasses import dataclass, field

from .instance import Instance, derive_period_structure
from .schedule import Solution, group_size

log = logging.getLogger(__name__)

FAMILIES = ("assign", "zlink", "size", "smax", "place", "cub", "cy", "clb", "load", "row")


@dataclass
class ModelStats:
    n_x: int
    n_z: int
    n_s: int
    n_y: int
    n_c: int
    n_p: int
    constraints: dict[str, int]
    zlink_bigm: tuple[int, ...]
    contribution_bigm: tuple[int, ...]

    def variables(self) -> dict[str, int]:
        return {"x": self.n_x, "z": self.n_z, "s": self.n_s, "y": self.n_y,
                "c": self.n_c, "p": self.n_p}


def _bigms(instance: Instance, literal_bigm: bool) -> tuple[tuple[int, ...], tuple[int, ...]]:
    t0, hs, smax = instance.base_period, instance.header_size, instance.max_group_size
    zl, cm = [], []
    for cls in instance.tasks_by_period:
        payload = sum(t.proc for t in cls)
        zl.append(len(cls) if literal_bigm else payload)
        # c <= M*y must admit every achievable group size
        cm.append(t0 if literal_bigm else max(t0, min(smax, hs + payload)))
    return tuple(zl), tuple(cm)


def model_statistics(instance: Instance, literal_bigm: bool = False) -> ModelStats:
    counts = derive_period_structure(instance).interval_counts
    sizes = [len(c) for c in instance.tasks_by_period]
    n_t = sum(sizes)
    n_tb = sum(n * b for n, b in zip(sizes, counts))
    n_b = sum(counts)
    cons = {"assign": n_t, "zlink": n_t, "size": n_t, "smax": n_t, "place": n_t,
            "cub": n_tb, "cy": n_tb, "clb": n_tb, "load": n_b, "row": counts[-1]}
    zl, cm = _bigms(instance, literal_bigm)
    return ModelStats(sum(n * n for n in sizes), n_t, n_t, n_tb, n_tb, n_b, cons, zl, cm)


def _terms(coeffs: list[tuple[int, str]]) -> str:
    out = []
    for c, v in coeffs:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = v if mag == 1 else f"{mag} {v}"
        out.append(f"{sign} {term}")
    text = " ".join(out)
    return text[2:] if text.startswith("+ ") else text


def _row(buf, name: str, coeffs: list[tuple[int, str]], sense: str, rhs: int, per_line: int = 8):
    buf.write(f" {name}: ")
    for start in range(0, len(coeffs), per_line):
        chunk = _terms(coeffs[start:start + per_line])
        if start:
            buf.write("\n   ")
            if not chunk.startswith("-"):
                chunk = "+ " + chunk
        buf.write(chunk)
    buf.write(f" {sense} {rhs}\n")


def export_lp(instance: Instance, literal_bigm: bool = False) -> str:
    ps = derive_period_structure(instance)
    counts, t0 = ps.interval_counts, instance.base_period
    hs, smax = instance.header_size, instance.max_group_size
    zl, cm = _bigms(instance, literal_bigm)
    classes = instance.tasks_by_period
    buf = io.StringIO()
    buf.write("\\ grouped periodic scheduling on one resource\n")
    buf.write(f"\\ periods {' '.join(map(str, instance.periods))} hs {hs} smax {smax}\n")
    if smax > t0:
        msg = f"max group size {smax} exceeds base period {t0}; contribution big-M is {list(cm)}"
        log.warning(msg)
        buf.write(f"\\ warning: {msg}\n")
    buf.write("Minimize\n obj: cmax\nSubject To\n")
    for u, cls in enumerate(classes):
        n = len(cls)
        for i in range(n):
            _row(buf, f"assign_{u}_{i}", [(1, f"x_{u}_{i}_{j}") for j in range(n)], "=", 1)
        for j in range(n):
            _row(buf, f"zlink_{u}_{j}",
                 [(t.proc, f"x_{u}_{i}_{j}") for i, t in enumerate(cls)] + [(-zl[u], f"z_{u}_{j}")],
                 "<=", 0)
        for j in range(n):
            coeffs = [(1, f"s_{u}_{j}")]
            if hs:
                coeffs.append((-hs, f"z_{u}_{j}"))
            coeffs += [(-t.proc, f"x_{u}_{i}_{j}") for i, t in enumerate(cls)]
            _row(buf, f"size_{u}_{j}", coeffs, "=", 0)
        for j in range(n):
            _row(buf, f"smax_{u}_{j}", [(1, f"s_{u}_{j}")], "<=", smax)
        for j in range(n):
            _row(buf, f"place_{u}_{j}", [(1, f"y_{u}_{j}_{k}") for k in range(counts[u])], "=", 1)
        for j in range(n):
            for k in range(counts[u]):
                c, s, y = f"c_{u}_{j}_{k}", f"s_{u}_{j}", f"y_{u}_{j}_{k}"
                _row(buf, f"cub_{u}_{j}_{k}", [(1, c), (-1, s)], "<=", 0)
                _row(buf, f"cy_{u}_{j}_{k}", [(1, c), (-cm[u], y)], "<=", 0)
                _row(buf, f"clb_{u}_{j}_{k}", [(1, c), (-1, s), (-cm[u], y)], ">=", -cm[u])
    for u, cls in enumerate(classes):
        for k in range(counts[u]):
            _row(buf, f"load_{u}_{k}",
                 [(1, f"p_{u}_{k}")] + [(-1, f"c_{u}_{j}_{k}") for j in range(len(cls))], "=", 0)
    for k in range(ps.row_count):
        _row(buf, f"row_{k}",
             [(1, f"p_{u}_{k % m}") for u, m in enumerate(counts)] + [(-1, "cmax")], "<=", 0)
    generals = ["cmax"]
    binaries = []
    for u, cls in enumerate(classes):
        n = len(cls)
        binaries += [f"x_{u}_{i}_{j}" for i in range(n) for j in range(n)]
        binaries += [f"z_{u}_{j}" for j in range(n)]
        generals += [f"s_{u}_{j}" for j in range(n)]
        binaries += [f"y_{u}_{j}_{k}" for j in range(n) for k in range(counts[u])]
        generals += [f"c_{u}_{j}_{k}" for j in range(n) for k in range(counts[u])]
        generals += [f"p_{u}_{k}" for k in range(counts[u])]
    buf.write("Generals\n")
    _names(buf, generals)
    buf.write("Binaries\n")
    _names(buf, binaries)
    buf.write("End\n")
    return buf.getvalue()


def _names(buf, names: list[str], per_line: int = 10):
    for start in range(0, len(names), per_line):
        buf.write(" " + " ".join(names[start:start + per_line]) + "\n")


# -- reading back ------------------------------------------------------------

@dataclass
class LpConstraint:
    name: str
    coeffs: dict[str, int]
    sense: str
    rhs: int


@dataclass
class LpModel:
    objective: dict[str, int]
    constraints: list[LpConstraint] = field(default_factory=list)
    generals: list[str] = field(default_factory=list)
    binaries: list[str] = field(default_factory=list)

    def variables(self) -> set[str]:
        names = set(self.objective) | set(self.generals) | set(self.binaries)
        for c in self.constraints:
            names |= set(c.coeffs)
        return names


_TERM = re.compile(r"([+-])?\s*(\d+)?\s*([A-Za-z_][A-Za-z0-9_]*)")
_SECTIONS = {"minimize": "obj", "subject to": "st", "generals": "gen", "binaries": "bin", "end": "end"}


def _parse_expr(text: str) -> dict[str, int]:
    coeffs: dict[str, int] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse LP expression at {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        coeffs[m.group(3)] = coeffs.get(m.group(3), 0) + sign * mag
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return coeffs


def read_lp(text: str) -> LpModel:
    """Parse the subset of the LP format written by :func:`export_lp`."""
    section = None
    statements: dict[str, list[str]] = {"obj": [], "st": [], "gen": [], "bin": []}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        key = line.lower()
        if key in _SECTIONS:
            section = _SECTIONS[key]
            continue
        if section in ("obj", "st"):
            if ":" in line.split()[0]:
                statements[section].append(line)
            else:
                statements[section][-1] += " " + line
        elif section in ("gen", "bin"):
            statements[section].extend(line.split())
    name, expr = statements["obj"][0].split(":", 1)
    model = LpModel(_parse_expr(expr), generals=statements["gen"], binaries=statements["bin"])
    for stmt in statements["st"]:
        name, body = stmt.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", body)
        if not m:
            raise ValueError(f"cannot parse constraint {stmt!r}")
        model.constraints.append(LpConstraint(name.strip(), _parse_expr(m.group(1)),
                                              m.group(2), int(m.group(3))))
    return model


def recount(model: LpModel) -> tuple[dict[str, int], dict[str, int]]:
    """Variable counts by family prefix and constraint counts by family."""
    var_counts = {f: 0 for f in "xzsycp"}
    for v in model.variables():
        prefix = v.split("_", 1)[0]
        if prefix in var_counts and "_" in v:
            var_counts[prefix] += 1
    cons = {f: 0 for f in FAMILIES}
    for c in model.constraints:
        cons[c.name.split("_", 1)[0]] += 1
    return var_counts, cons


def solution_values(instance: Instance, solution: Solution) -> dict[str, int]:
    """Translate a solution to model variable values; empty group slots are
    parked in interval 0 with zero size."""
    counts = derive_period_structure(instance).interval_counts
    vals: dict[str, int] = {}
    loads = []
    for u, cls in enumerate(instance.tasks_by_period):
        n = len(cls)
        index = {t.id: i for i, t in enumerate(cls)}
        groups = sorted((g for g in solution.nonempty() if g.period_index == u), key=lambda g: g.group_id)
        if len(groups) > n:
            raise ValueError(f"period {u}: {len(groups)} groups but only {n} slots")
        for i in range(n):
            for j in range(n):
                vals[f"x_{u}_{i}_{j}"] = 0
        load = [0] * counts[u]
        for j in range(n):
            g = groups[j] if j < len(groups) else None
            size = group_size(g.members, instance) if g else 0
            k_sel = solution.assignment[g.key] if g else 0
            vals[f"z_{u}_{j}"] = int(g is not None)
            vals[f"s_{u}_{j}"] = size
            for m in (g.members if g else ()):
                vals[f"x_{u}_{index[m]}_{j}"] = 1
            for k in range(counts[u]):
                vals[f"y_{u}_{j}_{k}"] = int(k == k_sel)
                vals[f"c_{u}_{j}_{k}"] = size if k == k_sel else 0
            load[k_sel] += size
        for k in range(counts[u]):
            vals[f"p_{u}_{k}"] = load[k]
        loads.append(load)
    rows = derive_period_structure(instance).row_count
    vals["cmax"] = max(sum(l[k % len(l)] for l in loads) for k in range(rows))
    return vals


def violated(model: LpModel, values: dict[str, int]) -> list[str]:
    """Names of constraints (and integrality/binary declarations) not satisfied."""
    bad = []
    for c in model.constraints:
        lhs = sum(a * values.get(v, 0) for v, a in c.coeffs.items())
        ok = {"<=": lhs <= c.rhs, ">=": lhs >= c.rhs, "=": lhs == c.rhs}[c.sense]
        if not ok:
            bad.append(c.name)
    bad += [v for v in model.binaries if values.get(v, 0) not in (0, 1)]
    bad += [v for v in model.variables() if values.get(v, 0) < 0]
    return bad


def objective_value(model: LpModel, values: dict[str, int]) -> int:
    return sum(a * values.get(v, 0) for v, a in model.objective.items())
