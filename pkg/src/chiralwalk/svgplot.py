"""Minimal dependency-free SVG rendering: line plots and heatmap grids."""

from __future__ import annotations

import math

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi) or hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def line_plot(
    series: list[tuple[str, list[float], list[float]]],
    title: str = "",
    xlabel: str = "t",
    ylabel: str = "value",
    width: int = 720,
    height: int = 480,
) -> str:
    """Polyline plot with axes, tick labels and a legend.

    ``series`` is a list of (label, xs, ys) triples sharing one coordinate
    frame.
    """
    ml, mr, mt, mb = 64, 16, 36, 48
    pw, ph = width - ml - mr, height - mt - mb
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2}" y="{mt - 12}" text-anchor="middle" '
            f'font-size="14">{title}</text>'
        )
    for t in _ticks(x0, x1):
        parts.append(
            f'<line x1="{px(t):.2f}" y1="{mt + ph}" x2="{px(t):.2f}" '
            f'y2="{mt + ph + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px(t):.2f}" y="{mt + ph + 18}" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in _ticks(y0, y1):
        parts.append(
            f'<line x1="{ml - 5}" y1="{py(t):.2f}" x2="{ml}" y2="{py(t):.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{ml - 8}" y="{py(t):.2f}" text-anchor="end" '
            f'dominant-baseline="middle">{_fmt(t)}</text>'
        )
    parts.append(
        f'<text x="{ml + pw / 2}" y="{height - 10}" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt + ph / 2})">{ylabel}</text>'
    )
    for idx, (label, xs, ys) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = mt + 16 + 16 * idx
        parts.append(
            f'<line x1="{ml + pw - 120}" y1="{ly}" x2="{ml + pw - 96}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{ml + pw - 90}" y="{ly + 4}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def _shade(value: float) -> str:
    # Linear on [0, 1]: value 1 renders light, value 0 dark.
    v = min(max(value, 0.0), 1.0)
    level = int(round(25 + 230 * v))
    return f"rgb({level},{level},{level})"


def heatmap_grid(
    matrices: list,
    labels: list[str],
    title: str = "",
    cell: int = 28,
    columns: int = 2,
) -> str:
    """Grid of square heatmap panels, one per matrix, light = 1 and dark = 0."""
    if not matrices:
        raise ValueError("nothing to plot")
    n = len(matrices[0])
    panel = n * cell
    gap = 46
    rows = (len(matrices) + columns - 1) // columns
    width = columns * panel + (columns + 1) * gap
    height = rows * (panel + gap) + gap + (24 if title else 0)
    top0 = 24 if title else 0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2}" y="18" text-anchor="middle" font-size="14">{title}</text>'
        )
    for idx, (mat, label) in enumerate(zip(matrices, labels)):
        gx = gap + (idx % columns) * (panel + gap)
        gy = top0 + gap + (idx // columns) * (panel + gap)
        parts.append(
            f'<text x="{gx + panel / 2}" y="{gy - 8}" text-anchor="middle">{label}</text>'
        )
        for r in range(n):
            for c in range(n):
                parts.append(
                    f'<rect x="{gx + c * cell}" y="{gy + r * cell}" width="{cell}" '
                    f'height="{cell}" fill="{_shade(float(mat[r][c]))}" '
                    f'stroke="#888" stroke-width="0.5"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts)
