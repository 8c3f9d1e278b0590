"""Static SVG pictures of 2-D inputs: polyline, ball family, tour."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

SIZE = 640
PAD = 20


def _frame(points: np.ndarray):
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    k = (SIZE - 2 * PAD) / span

    def tx(p):
        return PAD + (p[..., 0] - lo[0]) * k, SIZE - PAD - (p[..., 1] - lo[1]) * k

    return tx, k


def render(points: np.ndarray, *, curve: np.ndarray | None = None, closed: bool = False,
           balls: list[tuple[np.ndarray, float, int]] | None = None,
           tour: np.ndarray | None = None, title: str = "") -> str:
    """``balls`` holds ``(center, radius, scale)``; the frame fits ``points``."""
    points = np.asarray(points, float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("SVG output is only available for 2-D inputs")
    tx, k = _frame(points)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           f"<title>{escape(title)}</title>",
           '<rect width="100%" height="100%" fill="white"/>']
    if balls:
        scales = sorted({s for _, _, s in balls})
        for c, r, s in balls:
            x, y = tx(np.asarray(c, float))
            shade = 40 + int(160 * scales.index(s) / max(len(scales) - 1, 1))
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r * k:.2f}" fill="none" '
                       f'stroke="rgb({shade},{shade},255)" stroke-width="0.5"/>')

    def poly(pts, tag, style):
        x, y = tx(np.asarray(pts, float))
        coords = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(x, y))
        out.append(f'<{tag} points="{coords}" fill="none" {style}/>')

    if curve is not None and len(curve) > 1:
        poly(curve, "polygon" if closed else "polyline", 'stroke="black" stroke-width="1"')
    if tour is not None and len(tour) > 1:
        poly(tour, "polyline", 'stroke="crimson" stroke-width="1.2" stroke-opacity="0.7"')
    x, y = tx(points)
    for a, b in zip(x, y):
        out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="1.2" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
