"""Tiny dependency-free SVG line/scatter rendering.

The tidy CSV next to each figure is the authoritative artifact; these
renders exist for quick eyeballing only (axes, ticks, legend, optional
log10 scales).
"""

import math

_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f")

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 30, 55


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / count))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= count:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(v):
    if v == int(v) and abs(v) < 1e6:
        return str(int(v))
    return f"{v:.3g}"


def render_lines(series, title="", xlabel="", ylabel="", log_x=False,
                 log_y=False):
    """series: {name: (xs, ys)}; returns the SVG document as a string."""
    pts = {}
    for name, (xs, ys) in series.items():
        keep = [(x, y) for x, y in zip(xs, ys)
                if (not log_x or x > 0) and (not log_y or y > 0)]
        if keep:
            pts[name] = [(math.log10(x) if log_x else x,
                          math.log10(y) if log_y else y) for x, y in keep]
    if not pts:
        return ('<svg xmlns="http://www.w3.org/2000/svg" width="200" '
                'height="40"><text x="10" y="25">no plottable data</text></svg>')
    all_x = [x for p in pts.values() for x, _ in p]
    all_y = [y for p in pts.values() for _, y in p]
    x0, x1 = min(all_x), max(all_x)
    y0, y1 = min(all_y), max(all_y)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad_y = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad_y, y1 + pad_y

    def sx(x):
        return _ML + (x - x0) / (x1 - x0) * (_W - _ML - _MR)

    def sy(y):
        return _H - _MB - (y - y0) / (y1 - y0) * (_H - _MT - _MB)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'font-family="sans-serif" font-size="12">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>']
    if title:
        out.append(f'<text x="{_W // 2}" y="18" text-anchor="middle" '
                   f'font-size="14">{title}</text>')
    # axes
    out.append(f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" '
               f'y2="{_H - _MB}" stroke="black"/>')
    out.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
               f'stroke="black"/>')
    for t in _ticks(x0, x1):
        px = sx(t)
        out.append(f'<line x1="{px:.1f}" y1="{_H - _MB}" x2="{px:.1f}" '
                   f'y2="{_H - _MB + 5}" stroke="black"/>')
        label = f"1e{_fmt(t)}" if log_x else _fmt(t)
        out.append(f'<text x="{px:.1f}" y="{_H - _MB + 18}" '
                   f'text-anchor="middle">{label}</text>')
    for t in _ticks(y0, y1):
        py = sy(t)
        out.append(f'<line x1="{_ML - 5}" y1="{py:.1f}" x2="{_ML}" '
                   f'y2="{py:.1f}" stroke="black"/>')
        label = f"1e{_fmt(t)}" if log_y else _fmt(t)
        out.append(f'<text x="{_ML - 8}" y="{py + 4:.1f}" '
                   f'text-anchor="end">{label}</text>')
    if xlabel:
        out.append(f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 12}" '
                   f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{(_MT + _H - _MB) // 2}" '
                   f'text-anchor="middle" transform="rotate(-90 16 '
                   f'{(_MT + _H - _MB) // 2})">{ylabel}</text>')
    # series
    for i, (name, p) in enumerate(pts.items()):
        color = _COLORS[i % len(_COLORS)]
        path = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in p)
        if len(p) > 1:
            out.append(f'<polyline points="{path}" fill="none" '
                       f'stroke="{color}" stroke-width="1.5"/>')
        for x, y in p:
            out.append(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="2.5" '
                       f'fill="{color}"/>')
        ly = _MT + 16 + 16 * i
        out.append(f'<line x1="{_W - _MR - 130}" y1="{ly - 4}" '
                   f'x2="{_W - _MR - 110}" y2="{ly - 4}" stroke="{color}" '
                   f'stroke-width="2"/>')
        out.append(f'<text x="{_W - _MR - 105}" y="{ly}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out)
