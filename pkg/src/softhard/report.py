"""Deterministic CSV and SVG emission."""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

from .errors import NumericalError


class ReportError(NumericalError):
    """Output could not be written."""


def fmt_number(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    if hasattr(v, "dtype"):
        return fmt_number(v.item())
    return str(v)


@dataclass
class CsvArtifact:
    name: str
    header: list
    rows: list

    def render(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([fmt_number(v) for v in row])
        return buf.getvalue()


@dataclass
class Series:
    label: str
    x: list
    y: list


@dataclass
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: list = field(default_factory=list)
    logx: bool = False
    logy: bool = False


@dataclass
class SvgArtifact:
    name: str
    panels: list

    def render(self) -> str:
        return render_svg(self.panels)


@dataclass
class TextArtifact:
    name: str
    text: str

    def render(self) -> str:
        return self.text if self.text.endswith("\n") else self.text + "\n"


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_W, _H, _PAD = 360.0, 280.0, 50.0


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-9 * step:
        out.append(round(t, 12))
        t += step
    return out


def render_svg(panels) -> str:
    width = _W * len(panels)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{_H:.0f}" '
        f'viewBox="0 0 {width:.0f} {_H:.0f}" font-family="sans-serif" font-size="10">',
        f'<rect x="0" y="0" width="{width:.0f}" height="{_H:.0f}" fill="white"/>',
    ]
    for p_idx, panel in enumerate(panels):
        ox = p_idx * _W
        tx = (lambda v: math.log10(v)) if panel.logx else (lambda v: v)
        ty = (lambda v: math.log10(v)) if panel.logy else (lambda v: v)
        pts_all = [
            (tx(x), ty(y))
            for s in panel.series
            for x, y in zip(s.x, s.y)
            if math.isfinite(x) and math.isfinite(y) and (not panel.logx or x > 0) and (not panel.logy or y > 0)
        ]
        if not pts_all:
            continue
        x0 = min(p[0] for p in pts_all)
        x1 = max(p[0] for p in pts_all)
        y0 = min(p[1] for p in pts_all)
        y1 = max(p[1] for p in pts_all)
        if x1 == x0:
            x1 = x0 + 1
        if y1 == y0:
            y1 = y0 + 1
        left, right = ox + _PAD, ox + _W - 15
        top, bottom = 25.0, _H - 40
        sx = lambda v: left + (v - x0) / (x1 - x0) * (right - left)
        sy = lambda v: bottom - (v - y0) / (y1 - y0) * (bottom - top)
        parts.append(f'<text x="{ox + _W / 2:.1f}" y="15" text-anchor="middle">{_esc(panel.title)}</text>')
        parts.append(
            f'<rect x="{left:.1f}" y="{top:.1f}" width="{right - left:.1f}" height="{bottom - top:.1f}" '
            'fill="none" stroke="black"/>'
        )
        for t in _ticks(x0, x1):
            parts.append(f'<text x="{sx(t):.1f}" y="{bottom + 12:.1f}" text-anchor="middle">{_tick_label(t, panel.logx)}</text>')
        for t in _ticks(y0, y1):
            parts.append(f'<text x="{left - 4:.1f}" y="{sy(t) + 3:.1f}" text-anchor="end">{_tick_label(t, panel.logy)}</text>')
        parts.append(f'<text x="{(left + right) / 2:.1f}" y="{_H - 8:.1f}" text-anchor="middle">{_esc(panel.xlabel)}</text>')
        parts.append(
            f'<text x="{ox + 12:.1f}" y="{(top + bottom) / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 {ox + 12:.1f} {(top + bottom) / 2:.1f})">{_esc(panel.ylabel)}</text>'
        )
        for k, s in enumerate(panel.series):
            color = _COLORS[k % len(_COLORS)]
            coords = [
                f"{sx(tx(x)):.2f},{sy(ty(y)):.2f}"
                for x, y in zip(s.x, s.y)
                if math.isfinite(x) and math.isfinite(y) and (not panel.logx or x > 0) and (not panel.logy or y > 0)
            ]
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{" ".join(coords)}"/>')
            parts.append(f'<text x="{right - 5:.1f}" y="{top + 12 + 12 * k:.1f}" text-anchor="end" fill="{color}">{_esc(s.label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _tick_label(t, log):
    return f"1e{t:g}" if log else f"{t:g}"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_report(artifacts, out_dir: str) -> list:
    """Write every artifact under ``out_dir``; returns the manifest (sorted
    relative file names, each once).  The directory is checked before any
    file is written."""
    names = [a.name for a in artifacts]
    if len(set(names)) != len(names):
        raise ReportError("duplicate artifact names")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create output directory {out_dir}: {exc}") from exc
    if not os.access(out_dir, os.W_OK | os.X_OK):
        raise ReportError(f"output directory {out_dir} is not writable")
    rendered = [(a.name, a.render()) for a in artifacts]
    for name, text in rendered:
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return sorted(names)
