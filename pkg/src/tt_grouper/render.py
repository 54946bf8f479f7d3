"""Stacked-row Gantt rendering (SVG and plain text).

Each observation interval is drawn as one row of length T0; a group occurrence
is a block starting with a gray header segment of width hs.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .instance import Instance
from .schedule import ScheduleTimeline, Solution

PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
           "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac")
HEADER_FILL = "#9e9e9e"
GLYPHS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass
class RenderSpec:
    kind: str = "svg"               # "svg" or "text"
    scale: float | None = None      # px per time unit; None fits ~800 px
    row_height: int = 24
    color_by: str = "period"        # "period" or "group"
    show_headers: bool = True
    quantum: int | None = None      # text: time units per character

    def __post_init__(self):
        if self.kind not in ("svg", "text"):
            raise ValueError(f"unknown render kind {self.kind!r}")
        if self.color_by not in ("period", "group"):
            raise ValueError(f"color_by must be 'period' or 'group', got {self.color_by!r}")
        if self.row_height <= 0 or (self.scale is not None and self.scale <= 0) \
                or (self.quantum is not None and self.quantum <= 0):
            raise ValueError("render dimensions must be positive")


def _extent(timeline: ScheduleTimeline) -> int:
    t0 = timeline.base_period
    longest = max((o.end - o.row * t0 for o in timeline.occurrences), default=0)
    return max(t0, longest)


def _segments(occ, instance: Instance, members: dict, show_headers: bool):
    """(start, end, kind) pieces of one occurrence: header then member tasks."""
    hs = instance.header_size
    t = occ.start
    parts = []
    if show_headers and hs:
        parts.append((t, t + hs, "header"))
    t += hs
    names = members.get((occ.period_index, occ.group_id))
    if names:
        for name in names:
            p = instance.task_by_id[name].proc
            parts.append((t, t + p, name))
            t += p
    elif occ.end > t:
        parts.append((t, occ.end, "payload"))
    if not show_headers and hs:
        parts = [(occ.start, occ.start + hs, "payload")] + parts
    return parts


def render_gantt(timeline: ScheduleTimeline, instance: Instance, spec: RenderSpec | None = None,
                 solution: Solution | None = None) -> str:
    """``solution`` is optional; when given, member tasks are drawn as
    separate segments inside each group."""
    spec = spec or RenderSpec()
    members = {g.key: g.members for g in solution.nonempty()} if solution else {}
    if spec.kind == "text":
        return _render_text(timeline, instance, spec, members)
    return _render_svg(timeline, instance, spec, members)


def _render_svg(timeline, instance, spec, members) -> str:
    t0 = timeline.base_period
    extent = _extent(timeline)
    scale = spec.scale if spec.scale is not None else 800.0 / extent
    left, top, rh = 70, 30, spec.row_height
    width = left + extent * scale + 20
    height = top + timeline.row_count * rh + 30
    buf = io.StringIO()
    buf.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2f}" height="{height:.2f}" '
              f'viewBox="0 0 {width:.2f} {height:.2f}" font-family="sans-serif" font-size="11">\n')
    buf.write(f'<text x="{left}" y="{top - 10}">T0 = {t0}, hs = {instance.header_size}, '
              f'Smax = {instance.max_group_size}</text>\n')
    for row in range(timeline.row_count):
        y = top + row * rh
        buf.write(f'<text x="{left - 8}" y="{y + rh * 0.65:.2f}" text-anchor="end">k={row}</text>\n')
        buf.write(f'<rect x="{left}" y="{y}" width="{t0 * scale:.2f}" height="{rh}" '
                  f'fill="none" stroke="#dddddd"/>\n')
    for occ in timeline.occurrences:
        y = top + occ.row * rh + 2
        base = occ.row * t0
        color = PALETTE[(occ.period_index if spec.color_by == "period"
                         else occ.period_index * 7 + occ.group_id) % len(PALETTE)]
        label = f"g{occ.period_index}.{occ.group_id}"
        buf.write(f'<g><title>{escape(label)} [{occ.start}, {occ.end})</title>\n')
        for a, b, kind in _segments(occ, instance, members, spec.show_headers):
            fill = HEADER_FILL if kind == "header" else color
            buf.write(f'<rect x="{left + (a - base) * scale:.2f}" y="{y}" '
                      f'width="{(b - a) * scale:.2f}" height="{rh - 4}" fill="{fill}" '
                      f'stroke="#ffffff" stroke-width="0.5"/>\n')
        buf.write('</g>\n')
    xb = left + t0 * scale
    buf.write(f'<line x1="{xb:.2f}" y1="{top - 4}" x2="{xb:.2f}" '
              f'y2="{top + timeline.row_count * rh + 4}" stroke="#c00000" stroke-dasharray="4 3"/>\n')
    buf.write('</svg>\n')
    return buf.getvalue()


def _render_text(timeline, instance, spec, members) -> str:
    t0 = timeline.base_period
    extent = _extent(timeline)
    q = spec.quantum or max(1, math.ceil(extent / 100))
    ncells = math.ceil(extent / q)
    boundary = math.ceil(t0 / q)
    lines = [f"T0={t0} hs={instance.header_size} smax={instance.max_group_size} "
             f"quantum={q} ('#' header, A.. period index, '.' idle)"]
    rows = [["."] * ncells for _ in range(timeline.row_count)]
    for occ in timeline.occurrences:
        base = occ.row * t0
        glyph = GLYPHS[occ.period_index % len(GLYPHS)]
        for a, b, kind in _segments(occ, instance, members, spec.show_headers):
            ch = "#" if kind == "header" else glyph
            for cell in range(math.ceil((a - base) / q), math.ceil((b - base) / q)):
                rows[occ.row][cell] = ch
    for k, cells in enumerate(rows):
        body = "".join(cells[:boundary]) + "|" + "".join(cells[boundary:])
        lines.append(f"{k:>4} {body}")
    return "\n".join(lines) + "\n"
