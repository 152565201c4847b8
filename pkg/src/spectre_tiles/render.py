"""SVG output for tile patches and hexagon patches.

Coordinates stay exact everywhere else; they become floats only here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from xml.sax.saxutils import escape

from .geometry import Isometry, Polygon
from .tiles import CurveSpec, Patch, SCHEME_S, apply_edge_curve

DEFAULT_FILLS = {
    "hat": "#cfe3f5",
    "turtle": "#f2c9a0",
    "tile11": "#e8e8e8",
    "spectre": "#e8e8e8",
    "mystic-even": "#b7dfb0",
    "mystic-odd": "#8fcf86",
}


@dataclass
class RenderStyle:
    stroke_width: float = 0.06
    stroke: str = "#222222"
    fills: dict = field(default_factory=lambda: dict(DEFAULT_FILLS))
    curve: CurveSpec | None = None       # swap straight edges for this curve
    scheme: str = SCHEME_S
    outline_width: float = 0.25
    scale: float = 20.0
    margin: float = 1.0

    @classmethod
    def from_dict(cls, d: dict) -> "RenderStyle":
        st = cls()
        for k in ("stroke_width", "stroke", "outline_width", "scale", "margin", "scheme"):
            if k in d:
                setattr(st, k, type(getattr(st, k))(d[k]))
        st.fills.update(d.get("fills", {}))
        return st


def _fill(style: RenderStyle, shape: str, tag: str) -> str:
    if tag in style.fills:
        return style.fills[tag]
    if tag.startswith("mystic") and "mystic-even" in style.fills:
        return style.fills["mystic-even"]
    return style.fills.get(shape, "#dddddd")


@lru_cache(maxsize=16)
def _boundary(curve: CurveSpec, scheme: str):
    return apply_edge_curve(curve, scheme)


def tile_points(t, style: RenderStyle) -> list[tuple[float, float]]:
    """Float outline of a placed tile, with curved edges if the style asks."""
    if style.curve is not None and t.shape in ("tile11", "spectre"):
        bnd = _boundary(style.curve, style.scheme)
        s = bnd.scale
        g = Isometry(t.pose.rot, t.pose.reflect, t.pose.trans * s)
        return [(x / s, y / s) for x, y in (g.apply(p).to_float() for p in bnd.points)]
    return t.polygon.to_float()


def _path(points) -> str:
    head = "M{:.5f},{:.5f}".format(*points[0])
    rest = "".join("L{:.5f},{:.5f}".format(x, y) for x, y in points[1:])
    return head + rest + "Z"


def _document(paths: list[str], pts: list[tuple[float, float]], style: RenderStyle) -> str:
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, x1 = min(xs) - style.margin, max(xs) + style.margin
        y0, y1 = min(ys) - style.margin, max(ys) + style.margin
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    w, h = x1 - x0, y1 - y0
    # flip y so that the exact frame's counter-clockwise stays counter-clockwise on screen
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * style.scale:.1f}" '
            f'height="{h * style.scale:.1f}" viewBox="{x0:.5f} {-y1:.5f} {w:.5f} {h:.5f}">')
    body = ['<g transform="scale(1,-1)">'] + paths + ["</g>"]
    return "\n".join([head] + body + ["</svg>"]) + "\n"


def render_svg(patch: Patch, style: RenderStyle | None = None,
               outlines: list | None = None) -> str:
    """One path element per tile; optional thick outlines (e.g. supertiles)."""
    style = style or RenderStyle()
    paths, allpts = [], []
    for t in patch.tiles:
        pts = tile_points(t, style)
        allpts.extend(pts)
        paths.append(f'<path class="tile" data-shape="{escape(t.shape)}" d="{_path(pts)}" '
                     f'fill="{_fill(style, t.shape, t.tag)}" stroke="{style.stroke}" '
                     f'stroke-width="{style.stroke_width}"/>')
    for poly in outlines or ():
        pts = poly.to_float() if isinstance(poly, Polygon) else list(poly)
        paths.append(f'<path class="outline" d="{_path(pts)}" fill="none" '
                     f'stroke="{style.stroke}" stroke-width="{style.outline_width}"/>')
    return _document(paths, allpts, style)


def render_hexes(comb, style: RenderStyle | None = None) -> str:
    """Marked hexagons drawn as regular hexagons with their kind and edge labels."""
    from .hexsub import DIRS, HEXAGON_TABLE
    style = style or RenderStyle(scale=30.0)
    paths, allpts = [], []

    def xy(q, r):
        return (1.5 * q, math.sqrt(3) * (r + q / 2))

    for (q, r), (kind, rot) in sorted(comb.nodes.items()):
        cx, cy = xy(q, r)
        corners = [(cx + math.cos(math.radians(60 * k)), cy + math.sin(math.radians(60 * k)))
                   for k in range(6)]
        allpts.extend(corners)
        paths.append(f'<path class="hex" d="{_path(corners)}" fill="#f4f4f4" stroke="{style.stroke}" '
                     f'stroke-width="{style.stroke_width}"/>')
        paths.append(f'<text x="{cx:.4f}" y="{-cy:.4f}" font-size="0.5" text-anchor="middle" '
                     f'dominant-baseline="middle" transform="scale(1,-1)">{escape(kind)}</text>')
        for s in range(6):
            dq, dr = DIRS[s]
            nx, ny = xy(q + dq, r + dr)
            lx, ly = cx + (nx - cx) * 0.36, cy + (ny - cy) * 0.36
            lab = HEXAGON_TABLE[kind][(s - rot) % 6]
            paths.append(f'<text x="{lx:.4f}" y="{-ly:.4f}" font-size="0.22" text-anchor="middle" '
                         f'dominant-baseline="middle" transform="scale(1,-1)">{escape(str(lab))}</text>')
    return _document(paths, allpts, style)
