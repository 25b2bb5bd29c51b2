"""Minimal static SVG line chart for the payoff-versus-sigma figure."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
MARGIN = dict(left=90, right=30, top=50, bottom=70)
COLORS = {"equity": "#c0392b", "token": "#2471a3"}


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _num(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def line_chart(series: dict, xlabel: str, ylabel: str, title: str = "") -> str:
    """Render ``{name: [(x, y), ...]}`` as an SVG document string.

    Each series becomes one ``<polyline id=name>``; None values are dropped.
    """
    pts = {k: [(x, y) for x, y in v if y is not None] for k, v in series.items()}
    xs = [x for v in pts.values() for x, _ in v]
    ys = [y for v in pts.values() for _, y in v]
    if not xs:
        raise ValueError("nothing to plot")
    xt = nice_ticks(min(xs), max(xs))
    yt = nice_ticks(min(ys), max(ys))
    x0, x1 = min(xt[0], min(xs)), max(xt[-1], max(xs))
    y0, y1 = min(yt[0], min(ys)), max(yt[-1], max(ys))
    left, top = MARGIN["left"], MARGIN["top"]
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="14">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.0f}" y="28" text-anchor="middle" font-size="16">{escape(title)}</text>')
    bottom = top + ph
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{left + pw}" y2="{bottom}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>')
    for t in xt:
        X = sx(t)
        out.append(f'<line x1="{X:.2f}" y1="{bottom}" x2="{X:.2f}" y2="{bottom + 6}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{bottom + 24}" text-anchor="middle">{_num(t)}</text>')
    for t in yt:
        Y = sy(t)
        out.append(f'<line x1="{left - 6}" y1="{Y:.2f}" x2="{left}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 10}" y="{Y + 5:.2f}" text-anchor="end">{_num(t)}</text>')
    out.append(f'<text x="{left + pw / 2:.0f}" y="{HEIGHT - 20}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="24" y="{top + ph / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 24 {top + ph / 2:.0f})">{escape(ylabel)}</text>'
    )
    for i, (name, v) in enumerate(pts.items()):
        color = COLORS.get(name, "black")
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in v)
        out.append(f'<polyline id="{escape(name)}" points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        ly = top + 10 + 22 * i
        lx = left + pw - 150
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 38}" y="{ly + 5}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def payoff_figure(rows) -> str:
    """Payoff-versus-sigma chart from sweep rows."""
    return line_chart(
        {
            "equity": [(r.grid_value, r.equity_payoff) for r in rows],
            "token": [(r.grid_value, r.token_payoff) for r in rows],
        },
        xlabel="sigma",
        ylabel="entrepreneur payoff",
        title="Entrepreneur payoff, equity vs token (lambda = 0.1)",
    )
