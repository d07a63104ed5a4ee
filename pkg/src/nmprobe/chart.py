"""Tiny self-contained SVG line charts (no plotting dependency).

Emits a fixed-viewBox polyline chart. Charts are a convenience for eyeballing
results; the CSV outputs are the actual contract.
"""

from __future__ import annotations

import numpy as np

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 60, 20, 30, 45
_COLORS = ("#1f6fb2", "#c23b22", "#3a8f4e", "#8a5fbf")


def svg_line_chart(xs, series, title: str = "",
                   x_label: str = "", y_label: str = "") -> str:
    """Render one or more y-series over shared xs.

    `series` is a list of (name, ys, dashed) triples. Returns SVG text.
    """
    xs = np.asarray(xs, dtype=float)
    if len(xs) < 2 or not series:
        raise ValueError("need at least two x points and one series")
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, ys, _ in series])
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_hi - y_lo < 1e-12:
        y_hi = y_lo + 1.0
    x_lo, x_hi = float(xs.min()), float(xs.max())

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.0f}" y="20" text-anchor="middle" '
        f'font-size="14">{title}</text>',
        # axes
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
        'stroke="black" stroke-width="1"/>',
        f'<text x="{_ML - 8}" y="{py(y_hi) + 4:.1f}" text-anchor="end" '
        f'font-size="11">{y_hi:.3g}</text>',
        f'<text x="{_ML - 8}" y="{py(y_lo) + 4:.1f}" text-anchor="end" '
        f'font-size="11">{y_lo:.3g}</text>',
        f'<text x="{px(x_lo):.1f}" y="{_H - _MB + 16}" text-anchor="middle" '
        f'font-size="11">{x_lo:.3g}</text>',
        f'<text x="{px(x_hi):.1f}" y="{_H - _MB + 16}" text-anchor="middle" '
        f'font-size="11">{x_hi:.3g}</text>',
        f'<text x="{(_ML + _W - _MR) / 2:.0f}" y="{_H - 8}" text-anchor="middle" '
        f'font-size="12">{x_label}</text>',
        f'<text x="16" y="{(_MT + _H - _MB) / 2:.0f}" text-anchor="middle" '
        f'font-size="12" transform="rotate(-90 16 {(_MT + _H - _MB) / 2:.0f})">'
        f'{y_label}</text>',
    ]
    for k, (name, ys, dashed) in enumerate(series):
        ys = np.asarray(ys, dtype=float)
        if len(ys) != len(xs):
            raise ValueError(f"series {name!r} length mismatch")
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        dash = ' stroke-dasharray="7 4"' if dashed else ""
        color = _COLORS[k % len(_COLORS)]
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.6"{dash}/>')
        parts.append(f'<text x="{_W - _MR - 6}" y="{_MT + 16 + 16 * k}" '
                     f'text-anchor="end" font-size="12" fill="{color}">'
                     f'{name}{" (dashed)" if dashed else ""}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
