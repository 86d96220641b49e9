"""Static SVG regret plots, rendered by hand for byte determinism.

One chart per dataset: x is the round, y is cumulative regret, one
polyline per (strategy, kernel) curve with a shaded +-1 std band.
Coordinates are fixed to two decimals so identical curves always
produce identical bytes.
"""

WIDTH = 640
HEIGHT = 420
MARGIN_L = 62
MARGIN_R = 16
MARGIN_T = 34
MARGIN_B = 46

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(vmax: float, count: int = 5):
    if vmax <= 0:
        return [0.0]
    step = vmax / count
    return [step * i for i in range(count + 1)]


def render_curves(curves, title: str) -> str:
    """SVG text for a list of AggregateCurve sharing one dataset."""
    if not curves:
        raise ValueError("need at least one curve")
    t_max = max(int(c.t[-1]) for c in curves)
    y_max = max(float((c.mean + c.std).max()) for c in curves)
    y_span = y_max if y_max > 0 else 1.0
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(t):
        return MARGIN_L + plot_w * (t / t_max)

    def sy(v):
        v = min(max(v, 0.0), y_span)
        return MARGIN_T + plot_h * (1.0 - v / y_span)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{title}</text>',
    ]

    # axes and ticks
    x0, y0 = MARGIN_L, MARGIN_T + plot_h
    out.append(f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>')
    for tick in _ticks(float(t_max)):
        px = sx(tick)
        out.append(f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 4}" stroke="black"/>')
        out.append(f'<text x="{_fmt(px)}" y="{y0 + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{tick:g}</text>')
    for tick in _ticks(y_span):
        py = sy(tick)
        out.append(f'<line x1="{x0 - 4}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" stroke="black"/>')
        out.append(f'<text x="{x0 - 7}" y="{_fmt(py + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{tick:.3g}</text>')
    out.append(f'<text x="{x0 + plot_w // 2}" y="{HEIGHT - 8}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">round</text>')
    out.append(f'<text x="16" y="{MARGIN_T + plot_h // 2}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {MARGIN_T + plot_h // 2})">cumulative regret</text>')

    for i, curve in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        upper = [(sx(t), sy(m + s)) for t, m, s in zip(curve.t, curve.mean, curve.std)]
        lower = [(sx(t), sy(m - s)) for t, m, s in zip(curve.t, curve.mean, curve.std)]
        band = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in upper + lower[::-1])
        out.append(f'<polygon points="{band}" fill="{color}" fill-opacity="0.15" stroke="none"/>')
        line = " ".join(
            f"{_fmt(sx(t))},{_fmt(sy(m))}" for t, m in zip(curve.t, curve.mean))
        out.append(f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="1.5"/>')

    # legend, top-left inside the plot area
    for i, curve in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        ly = MARGIN_T + 14 + 16 * i
        label = f"{curve.strategy}/{curve.kernel}"
        out.append(f'<line x1="{x0 + 8}" y1="{ly}" x2="{x0 + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x0 + 36}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="11">{label}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
