"""Minimal self-contained SVG emission for p_L vs sigma^2/2pi curves.

No plotting dependency: the output is a deterministic function of the rows
(linear x, log10 y, one polyline per (code, decoder) series, Wilson CI
whiskers, legend). Rows with p_l = 0 cannot be placed on a log axis; they
are dropped from the polyline and the legend notes how many were omitted.
"""

import math

WIDTH, HEIGHT = 760, 520
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 190, 30, 60

PALETTE = (
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
    "#66a61e", "#e6ab02", "#a6761d", "#666666",
)


def _fmt(x):
    return f"{x:.2f}"


def _ticks_linear(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _ticks_log(lo, hi):
    first = math.floor(math.log10(lo))
    last = math.ceil(math.log10(hi))
    return [10.0**e for e in range(first, last + 1)]


def render(series, title="logical error probability"):
    """series: list of (label, rows) with rows = [(x, p, lo, hi), ...]."""
    xs = [r[0] for _, rows in series for r in rows]
    ys = [v for _, rows in series for r in rows for v in (r[1], r[3]) if v > 0]
    los = [r[2] for _, rows in series for r in rows if r[2] > 0]
    if not xs or not ys:
        raise ValueError("nothing to plot: no positive p_l values")
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 0.5 * abs(x0) - 1e-12, x1 + 0.5 * abs(x1) + 1e-12
    y1 = max(ys)
    y0 = min(los + ys)
    ly0, ly1 = math.log10(y0) - 0.15, math.log10(y1) + 0.15

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * plot_w

    def py(y):
        return MARGIN_T + (ly1 - math.log10(y)) / (ly1 - ly0) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333"/>',
        f'<text x="{MARGIN_L}" y="{MARGIN_T - 10}" font-size="14">{title}</text>',
        f'<text x="{MARGIN_L + plot_w / 2:.0f}" y="{HEIGHT - 15}" '
        'text-anchor="middle">&#963;&#178;/2&#960;</text>',
        f'<text x="20" y="{MARGIN_T + plot_h / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {MARGIN_T + plot_h / 2:.0f})">p_L</text>',
    ]

    for tx in _ticks_linear(x0, x1):
        out.append(
            f'<line x1="{_fmt(px(tx))}" y1="{MARGIN_T + plot_h}" '
            f'x2="{_fmt(px(tx))}" y2="{MARGIN_T + plot_h + 5}" stroke="#333"/>'
        )
        out.append(
            f'<text x="{_fmt(px(tx))}" y="{MARGIN_T + plot_h + 20}" '
            f'text-anchor="middle">{tx:.4g}</text>'
        )
    for ty in _ticks_log(y0, y1):
        if not (10**ly0 <= ty <= 10**ly1):
            continue
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{_fmt(py(ty))}" '
            f'x2="{MARGIN_L}" y2="{_fmt(py(ty))}" stroke="#333"/>'
        )
        out.append(
            f'<line x1="{MARGIN_L}" y1="{_fmt(py(ty))}" x2="{MARGIN_L + plot_w}" '
            f'y2="{_fmt(py(ty))}" stroke="#ddd" stroke-dasharray="3,4"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 10}" y="{_fmt(py(ty) + 4)}" '
            f'text-anchor="end">1e{int(math.log10(ty))}</text>'
        )

    legend_y = MARGIN_T + 10
    for idx, (label, rows) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        drawn = [(x, p, lo, hi) for x, p, lo, hi in rows if p > 0]
        omitted = len(rows) - len(drawn)
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(p))}" for x, p, _, _ in drawn)
        if pts:
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                'stroke-width="1.5"/>'
            )
        for x, p, lo, hi in drawn:
            cx = _fmt(px(x))
            out.append(
                f'<circle cx="{cx}" cy="{_fmt(py(p))}" r="3" fill="{color}"/>'
            )
            lo_y = py(lo) if lo > 0 else MARGIN_T + plot_h
            out.append(
                f'<line x1="{cx}" y1="{_fmt(py(hi))}" x2="{cx}" '
                f'y2="{_fmt(lo_y)}" stroke="{color}" stroke-width="1"/>'
            )
        note = f" ({omitted} zero omitted)" if omitted else ""
        lx = MARGIN_L + plot_w + 12
        out.append(
            f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 18}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 24}" y="{legend_y + 4}">{label}{note}</text>'
        )
        legend_y += 18

    out.append("</svg>")
    return "\n".join(out) + "\n"
