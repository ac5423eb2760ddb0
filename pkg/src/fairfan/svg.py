"""Deterministic SVG pictures of planar instances.

Bumps are drawn as discs (one colour per measure), pieces as pale polygons
clipped to the viewport, fan rays and cut lines as dark segments.
"""

from __future__ import annotations

from .geometry import ConvexPartition
from .measures import MeasureFamily

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)
FILLS = ("#f2f2f2", "#e4ecf7", "#f7ece4", "#e9f5e6", "#f3e8f7", "#f7f5df")


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _clip(poly, a, b):
    """Keep the part of ``poly`` with a.x <= b."""
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        fp = a[0] * p[0] + a[1] * p[1] - b
        fq = a[0] * q[0] + a[1] * q[1] - b
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _bounds(family: MeasureFamily, extra=()):
    xs, ys = [], []
    for mu in family.measures:
        r = float(mu.bump_radius)
        for p, _ in mu.atoms:
            xs += [float(p[0]) - r, float(p[0]) + r]
            ys += [float(p[1]) - r, float(p[1]) + r]
    for p in extra:
        xs.append(float(p[0]))
        ys.append(float(p[1]))
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    pad = 0.15 * max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    return lo_x - pad, hi_x + pad, lo_y - pad, hi_y + pad


def render(family: MeasureFamily, partition: ConvexPartition | None = None, fan=None,
           width: int = 600, title: str | None = None) -> str:
    """SVG text for a planar family and optional partition.

    ``fan`` (a FanPartition) adds rays from its apex.
    """
    if family.dimension != 2:
        raise ValueError("SVG output is only available for d = 2")
    extra = [fan.apex.basepoint] if fan is not None else []
    x0, x1, y0, y1 = _bounds(family, extra)
    scale = width / (x1 - x0)
    height = int(round((y1 - y0) * scale))

    def px(p):
        return (float(p[0]) - x0) * scale, (y1 - float(p[1])) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    if partition is not None:
        box = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        for i, region in enumerate(partition.regions):
            poly = box
            for h in region.halfspaces:
                a, b = h.normalized()
                poly = _clip(poly, (float(a[0]), float(a[1])), float(b))
                if not poly:
                    break
            if len(poly) < 3:
                continue
            pts = " ".join(f"{_fmt(u)},{_fmt(v)}" for u, v in map(px, poly))
            out.append(f'<polygon points="{pts}" fill="{FILLS[i % len(FILLS)]}" '
                       f'stroke="#333" stroke-width="1.5"/>')
            cx = sum(p[0] for p in poly) / len(poly)
            cy = sum(p[1] for p in poly) / len(poly)
            u, v = px((cx, cy))
            out.append(f'<text x="{_fmt(u)}" y="{_fmt(v)}" font-size="14" fill="#555">C{i + 1}</text>')
    if fan is not None:
        apex = fan.apex.basepoint
        reach = 2 * max(x1 - x0, y1 - y0)
        for s, t in fan.rays:
            v = fan.projection.lift(s, t)
            norm = (float(v[0]) ** 2 + float(v[1]) ** 2) ** 0.5
            tip = (float(apex[0]) + reach * float(v[0]) / norm, float(apex[1]) + reach * float(v[1]) / norm)
            a, b = px(apex), px(tip)
            out.append(f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
                       f'y2="{_fmt(b[1])}" stroke="black" stroke-width="2"/>')
        a = px(apex)
        out.append(f'<circle cx="{_fmt(a[0])}" cy="{_fmt(a[1])}" r="4" fill="black"/>')
    for j, mu in enumerate(family.measures):
        colour = PALETTE[j % len(PALETTE)]
        r = float(mu.bump_radius) * scale
        for p, _ in mu.atoms:
            u, v = px(p)
            out.append(f'<circle cx="{_fmt(u)}" cy="{_fmt(v)}" r="{_fmt(max(r, 2.0))}" '
                       f'fill="{colour}" fill-opacity="0.75"><title>{mu.label}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["render"]
