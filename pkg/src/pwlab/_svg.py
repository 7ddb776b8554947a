"""Minimal SVG line charts (log-y) for emitted experiment tables.

Hand-rolled on purpose: plots are an optional convenience and must
never pull in a plotting stack or fail an experiment run.
"""

from __future__ import annotations

import math

_PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def write_line_chart(path, series: dict, x_label: str, y_label: str, title: str) -> None:
    """Write a log-y line chart; series maps label -> (xs, ys)."""
    width, height, margin = 720, 480, 60
    xs_all = [x for xs, _ in series.values() for x in xs]
    ys_all = [y for _, ys in series.values() for y in ys if y is not None and y > 0]
    if not xs_all or not ys_all:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = math.log10(min(ys_all)), math.log10(max(ys_all))
    if x_hi == x_lo:
        x_hi = x_lo + 1
    if y_hi == y_lo:
        y_hi = y_lo + 1

    def sx(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(y):
        ly = math.log10(y)
        return height - margin - (ly - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.0f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<text x="{width/2:.0f}" y="{height-12:.0f}" text-anchor="middle" font-size="12">{x_label}</text>',
        f'<text x="16" y="{height/2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {height/2:.0f})">{y_label} (log scale)</text>',
        f'<rect x="{margin}" y="{margin}" width="{width-2*margin}" height="{height-2*margin}" '
        'fill="none" stroke="#999"/>',
    ]
    for tick in range(int(math.floor(y_lo)), int(math.ceil(y_hi)) + 1):
        y = sy(10.0**tick)
        if margin <= y <= height - margin:
            parts.append(
                f'<line x1="{margin}" y1="{y:.1f}" x2="{width-margin}" y2="{y:.1f}" '
                'stroke="#eee"/>'
            )
            parts.append(
                f'<text x="{margin-6}" y="{y+4:.1f}" text-anchor="end" font-size="10">'
                f"1e{tick}</text>"
            )
    for i, (label, (xs, ys)) in enumerate(sorted(series.items())):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(
            f"{sx(x):.1f},{sy(y):.1f}" for x, y in zip(xs, ys) if y is not None and y > 0
        )
        if pts:
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        parts.append(
            f'<text x="{width-margin+4}" y="{margin+14*i+10}" font-size="10" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>\n")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
