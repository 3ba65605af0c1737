"""Standalone SVG entropy plots and rank plots.

Output is plain text built from fixed-precision numbers, so identical inputs
give byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import List, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from linesmooth.pipeline import EntropyCurve, RankReport, average_rank

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
)
MODEL_POINTS = 64


def _n(v: float) -> str:
    return f"{v:.3f}"


def _doc(width: int, height: int, body: List[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">')
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="white"/>', *body, "</svg>"]) + "\n"


def _text(x, y, s, **attrs) -> str:
    extra = "".join(f" {k.rstrip('_').replace('_', '-')}={quoteattr(str(v))}" for k, v in attrs.items())
    return f'<text x="{_n(x)}" y="{_n(y)}"{extra}>{escape(s)}</text>'


def entropy_plot_svg(curves: Sequence[EntropyCurve], metric_label: str | None = None) -> str:
    """Scatter per method, fitted model over its integration interval, shaded area, legend."""
    if not curves:
        raise ValueError("need at least one curve")
    width, height = 640, 420
    left, right, top, bottom = 70, 170, 20, 50
    pw, ph = width - left - right, height - top - bottom

    xs = [p[0] for c in curves for p in c.samples]
    ys = [p[1] for c in curves for p in c.samples] + [0.0]
    model_xy = {}
    for c in curves:
        if c.fit is not None and c.interval is not None and c.interval[0] < c.interval[1]:
            gx = np.linspace(c.interval[0], c.interval[1], MODEL_POINTS)
            gy = np.maximum(c.fit(gx), 0.0)
            model_xy[c.method] = (gx, gy)
            xs += [float(gx[0]), float(gx[-1])]
            ys += [float(gy.min()), float(gy.max())]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y1 = y0 + 1.0

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    body = [
        f'<line class="axis" x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
        _text(left + pw / 2, height - 12, "ApEx", text_anchor="middle", class_="xlabel"),
        _text(18, top + ph / 2, metric_label or curves[0].metric, text_anchor="middle",
              transform=f"rotate(-90 18 {_n(top + ph / 2)})", class_="ylabel"),
        _text(left, top + ph + 16, f"{x0:.3g}", text_anchor="middle"),
        _text(left + pw, top + ph + 16, f"{x1:.3g}", text_anchor="middle"),
        _text(left - 6, top + ph, f"{y0:.3g}", text_anchor="end"),
        _text(left - 6, top + 4, f"{y1:.3g}", text_anchor="end"),
    ]
    for i, c in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        body.append(f'<g class="method" data-method={quoteattr(c.method)}>')
        if c.method in model_xy:
            gx, gy = model_xy[c.method]
            pts = " ".join(f"{_n(sx(a))},{_n(sy(b))}" for a, b in zip(gx, gy))
            base = f"{_n(sx(gx[-1]))},{_n(sy(0.0))} {_n(sx(gx[0]))},{_n(sy(0.0))}"
            body.append(f'<polygon class="area" points="{pts} {base}" fill="{color}" fill-opacity="0.15" stroke="none"/>')
            body.append(f'<polyline class="model" data-lo="{float(c.interval[0])!r}" data-hi="{float(c.interval[1])!r}" '
                        f'points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for a, b in c.samples:
            body.append(f'<circle class="sample" cx="{_n(sx(a))}" cy="{_n(sy(b))}" r="2.5" fill="{color}"/>')
        body.append("</g>")
        ly = top + 14 + 18 * i
        body.append(f'<rect class="legend" x="{left + pw + 16}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
        label = c.method if math.isinf(c.area) else f"{c.method} ({c.area:.4g})"
        body.append(_text(left + pw + 32, ly, label, font_size=11))
    return _doc(width, height, body)


def render_entropy_plot(curves: Sequence[EntropyCurve], path, metric_label: str | None = None) -> None:
    Path(path).write_text(entropy_plot_svg(curves, metric_label))


def rank_plot_svg(report: RankReport, metric: str, tracks: int = 4) -> str:
    """One column per dataset plus an average column; best method on top.

    Tracks connect the positions of the ``tracks`` best methods by average rank.
    """
    per = report.ranks_for(metric)
    if not per:
        raise ValueError(f"no ranks for metric {metric!r}")
    avg = report.average_ranks.get(metric)
    if avg is None:
        avg = average_rank(list(per.values()))
    columns = [(d, sorted(r, key=lambda m: (r[m], m))) for d, r in per.items()]
    columns.append(("average", list(avg)))
    methods = list(avg)

    col_w, row_h, top, left = 120, 22, 60, 20
    width = left * 2 + col_w * len(columns)
    height = top + row_h * len(methods) + 20

    def pos(ci, method):
        row = columns[ci][1].index(method)
        return left + ci * col_w + col_w / 2, top + row * row_h

    body = [_text(width / 2, 22, f"rank plot: {metric}", text_anchor="middle", font_size=14)]
    for method in methods[:min(tracks, len(methods))]:
        color = PALETTE[methods.index(method) % len(PALETTE)]
        pts = " ".join(f"{_n(x)},{_n(y)}" for x, y in (pos(ci, method) for ci in range(len(columns))))
        body.append(f'<polyline class="track" data-method={quoteattr(method)} points="{pts}" '
                    f'fill="none" stroke="{color}" stroke-width="6" stroke-opacity="0.35"/>')
    for ci, (name, order) in enumerate(columns):
        cx = left + ci * col_w + col_w / 2
        body.append(f'<g class="column" data-name={quoteattr(name)}>')
        body.append(_text(cx, top - 22, name, text_anchor="middle", font_size=11, font_weight="bold"))
        for method in order:
            _, y = pos(ci, method)
            body.append(_text(cx, y + 4, method, text_anchor="middle", font_size=11, class_="entry"))
        body.append("</g>")
    return _doc(width, height, body)


def render_rank_plot(report: RankReport, metric: str, path, tracks: int = 4) -> None:
    Path(path).write_text(rank_plot_svg(report, metric, tracks))
