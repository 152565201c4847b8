"""Tile(a,b), hats, turtles, Spectres and the even/odd edge resizing.

The 14-entry edge word of Tile(a,b) is read off the boundary of the 8-kite
hat once (:func:`derive_edge_word`) and frozen in :data:`EDGE_WORD`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .geometry import (
    Coord4, IDENTITY, Isometry, ORIGIN, Polygon, QSqrt3, SQRT3_EXACT,
    congruence, direction_index, is_simple, polygon_area, unit,
)
from . import kitegrid

EVEN, ODD = "even", "odd"

# 8 kites of the hat and 10 of the turtle, at grid pose 0.
HAT_CELLS = ((0, 0, 0), (0, 0, 1), (0, 0, 4), (0, 0, 5),
             (1, -1, 1), (1, -1, 2), (1, 0, 3), (1, 0, 4))
TURTLE_CELLS = ((0, -1, 1), (0, -1, 2), (0, 0, 0), (0, 0, 1), (0, 0, 4),
                (0, 0, 5), (1, -1, 2), (1, -1, 3), (1, 0, 4), (1, 0, 5))

# (direction k of u(k), length token) counterclockwise from the vertex
# preceding the two collinear edges' predecessor.  Token A edges are the
# even directions, B edges the odd ones.
EDGE_WORD = ((10, "A"), (0, "A"), (0, "A"), (2, "A"), (11, "B"), (1, "B"),
             (4, "A"), (6, "A"), (3, "B"), (5, "B"), (8, "A"), (6, "A"),
             (9, "B"), (7, "B"))

# index of the 180-degree vertex between the collinear edges 1 and 2
STRAIGHT_VERTEX = 2


def derive_edge_word(cells=HAT_CELLS) -> tuple[tuple[int, str], ...]:
    """Read the Tile(a,b) edge word off the boundary of the 8-kite hat."""
    cycle = kitegrid.boundary_cycle(kitegrid.pack(*c) for c in cells)
    word = []
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        k, length = direction_index(b - a)
        word.append((k, "A" if length == 1 else "B"))
    # rotate so that the collinear pair sits at positions 1, 2
    n = len(word)
    for s in range(n):
        w = word[s:] + word[:s]
        if w[1][0] == w[2][0] and w[1][1] == w[2][1]:
            return tuple(w)
    raise ValueError("no collinear edge pair on the boundary")


def as_length(x) -> QSqrt3:
    x = QSqrt3.coerce(x)
    if x.den != 1:
        raise ValueError(f"edge length {x} is not in Z[sqrt3]")
    if x.sign() < 0:
        raise ValueError("edge lengths must be non-negative")
    return x


def scaled_unit(k: int, length: QSqrt3) -> Coord4:
    """length * u(k) as an integer Coord4 (length in Z[sqrt3])."""
    return unit(k) * length.p + (unit(k - 1) + unit(k + 1)) * length.q


def build_tile_ab(a=1, b=1) -> Polygon:
    """The 14-edge polygon Tile(a,b), counterclockwise, first vertex at the origin.

    Zero-length edges are collapsed, so Tile(0,1) and Tile(1,0) come out with
    fewer vertices.
    """
    la, lb = as_length(a), as_length(b)
    if la.sign() == 0 and lb.sign() == 0:
        raise ValueError("Tile(0,0) is degenerate")
    pts = [ORIGIN]
    for k, tok in EDGE_WORD:
        length = la if tok == "A" else lb
        if length.sign() == 0:
            continue
        pts.append(pts[-1] + scaled_unit(k, length))
    if pts[-1] != ORIGIN:
        raise AssertionError("edge word does not close")
    pts.pop()
    # merge the 180-degree vertices created by collapsing zero edges
    # except the designated collinear vertex of the full word
    return Polygon(pts)


TILE11 = build_tile_ab(1, 1)
HAT = build_tile_ab(1, SQRT3_EXACT)
TURTLE = build_tile_ab(SQRT3_EXACT, 1)

SHAPE_LENGTHS = {
    "tile11": (QSqrt3(1), QSqrt3(1)),
    "spectre": (QSqrt3(1), QSqrt3(1)),
    "hat": (QSqrt3(1), SQRT3_EXACT),
    "turtle": (SQRT3_EXACT, QSqrt3(1)),
}


def base_polygon(shape: str) -> Polygon:
    if shape in ("tile11", "spectre", "mystic-half"):
        return TILE11
    if shape == "hat":
        return HAT
    if shape == "turtle":
        return TURTLE
    raise KeyError(shape)


def interior_angles(P: Polygon) -> list[int]:
    """Interior angles in degrees (multiples of 30) of a counterclockwise polygon."""
    edges = P.edges()
    dirs = [direction_index(e)[0] for e in edges]
    n = len(dirs)
    return [180 - 30 * ((dirs[i] - dirs[i - 1]) % 12 if (dirs[i] - dirs[i - 1]) % 12 <= 6
                        else (dirs[i] - dirs[i - 1]) % 12 - 12)
            for i in range(n)]


# ---------------------------------------------------------------------------
# placed tiles and patches


@dataclass(frozen=True)
class PlacedTile:
    shape: str
    pose: Isometry = IDENTITY
    tag: str = ""

    @property
    def polygon(self) -> Polygon:
        return base_polygon(self.shape).transformed(self.pose)

    @property
    def parity(self) -> str:
        return classify_parity(self)

    @property
    def handedness(self) -> str:
        return "reflected" if self.pose.reflect else "unreflected"


def classify_parity(t: PlacedTile) -> str:
    """Parity of the direction of the tile's collinear edge pair under its pose.

    The collinear edges of the identity-posed tile point along u(0), so the
    identity pose is even and every 30-degree turn flips the parity.
    """
    return EVEN if t.pose.rot % 2 == 0 else ODD


@dataclass
class Patch:
    """A finite list of placed tiles; order is significant for round trips."""

    tiles: list[PlacedTile] = field(default_factory=list)
    markings: list[tuple] = field(default_factory=list)

    def __len__(self):
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    def polygons(self) -> list[Polygon]:
        return [t.polygon for t in self.tiles]

    def transformed(self, g: Isometry) -> "Patch":
        return Patch([PlacedTile(t.shape, g @ t.pose, t.tag) for t in self.tiles],
                     list(self.markings))


# ---------------------------------------------------------------------------
# edge resizing


def _tile_edges(t: PlacedTile):
    """(start, end, world direction, length) for each boundary edge of a placed tile."""
    la, lb = SHAPE_LENGTHS[t.shape]
    g = t.pose
    pos = g.apply(ORIGIN)
    out = []
    for k, tok in EDGE_WORD:
        length = la if tok == "A" else lb
        d = (g.rot - k) % 12 if g.reflect else (g.rot + k) % 12
        end = pos + scaled_unit(d, length)
        out.append((pos, end, d, length))
        pos = end
    return out


def _shape_for(la: QSqrt3, lb: QSqrt3) -> str:
    for name in ("tile11", "hat", "turtle"):
        if SHAPE_LENGTHS[name] == (la, lb):
            return name
    raise ValueError(f"no named shape for Tile({la},{lb})")


def resize_edges(patch: Patch, parity: str, new_len) -> Patch:
    """Give every edge whose direction has ``parity`` the length ``new_len``.

    New vertex positions are found by walking the edge graph of the patch
    from the first vertex of the first tile, which stays fixed.  Raises
    ValueError if the walk is inconsistent, the patch is disconnected or a
    tile boundary stops being simple.
    """
    new_len = as_length(new_len)
    want = 0 if parity == EVEN else 1
    adj: dict = {}
    tile_edges = []
    for t in patch.tiles:
        es = _tile_edges(t)
        tile_edges.append(es)
        for a, b, d, _length in es:
            vec = scaled_unit(d, new_len) if d % 2 == want else b - a
            adj.setdefault(a.key(), []).append((b.key(), vec))
            adj.setdefault(b.key(), []).append((a.key(), -vec))
    if not tile_edges:
        return Patch([], list(patch.markings))
    root = tile_edges[0][0][0]
    new_pos = {root.key(): root}
    queue = deque([root.key()])
    while queue:
        a = queue.popleft()
        for b, vec in adj[a]:
            p = new_pos[a] + vec
            if b in new_pos:
                if new_pos[b] != p:
                    raise ValueError("edge resize is path dependent (patch not edge-to-edge)")
            else:
                new_pos[b] = p
                queue.append(b)
    if len(new_pos) != len(adj):
        raise ValueError("patch is disconnected")
    out = []
    for t, es in zip(patch.tiles, tile_edges):
        la, lb = SHAPE_LENGTHS[t.shape]
        # which token sits on which world parity for this tile
        a_parity = (t.pose.rot + EDGE_WORD[0][0]) % 2
        na = new_len if a_parity == want else la
        nb = new_len if (1 - a_parity) == want else lb
        shape = _shape_for(na, nb)
        pose = Isometry(t.pose.rot, t.pose.reflect, new_pos[es[0][0].key()])
        nt = PlacedTile(shape, pose, t.tag)
        got = [new_pos[a.key()] for a, *_ in es]
        if [v.key() for v in nt.polygon.vertices] != [v.key() for v in
                                                     (got if not pose.reflect else got[::-1])]:
            # reflected tiles list their vertices clockwise in _tile_edges
            if sorted(v.key() for v in nt.polygon.vertices) != sorted(v.key() for v in got):
                raise AssertionError("resized tile does not match its edge walk")
        if not is_simple(nt.polygon):
            raise ValueError("tile boundary self-intersects after resize")
        out.append(nt)
    return Patch(out, list(patch.markings))


def transport_vector(patch: Patch, a: Coord4, b: Coord4, parity: str, new_len) -> Coord4:
    """Image of the vector b - a (both patch vertices) under resize_edges."""
    moved = resize_edges(Patch(list(patch.tiles)), parity, new_len)
    old = {}
    for t_old, t_new in zip(patch.tiles, moved.tiles):
        for v_old, v_new in zip(_walk(t_old), _walk(t_new)):
            old[v_old.key()] = v_new
    return old[b.key()] - old[a.key()]


def _walk(t: PlacedTile) -> list[Coord4]:
    return [e[0] for e in _tile_edges(t)]


# ---------------------------------------------------------------------------
# edge curves


S_CURVE, FREE = "s-curve", "free"
SCHEME_S, SCHEME_ALT = "s-curve", "alternating"


@dataclass(frozen=True)
class CurveSpec:
    """Sampled curve in the edge frame, from (0, 0) to (1, 0), rational points."""

    samples: tuple[tuple[Fraction, Fraction], ...]
    kind: str = FREE

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.samples)
        object.__setattr__(self, "samples", pts)
        if pts[0] != (0, 0) or pts[-1] != (1, 0):
            raise ValueError("curve must run from (0,0) to (1,0)")
        if self.kind == S_CURVE and inverse_curve(pts) != pts:
            raise ValueError("s-curve is not symmetric under the half turn about (1/2, 0)")

    @property
    def straight(self) -> bool:
        return all(y == 0 for _, y in self.samples)

    @property
    def denominator(self) -> int:
        d = 1
        for x, y in self.samples:
            d = lcm(d, x.denominator, y.denominator)
        return d


def inverse_curve(pts):
    """Half turn about (1/2, 0) followed by reversal, so it still runs 0 -> 1."""
    return tuple((1 - x, -y) for x, y in reversed(pts))


def default_s_curve(n: int = 8, amplitude: Fraction = Fraction(1, 10)) -> CurveSpec:
    """A piecewise-linear sine-like s-curve: up in the first half, down in the second."""
    half = []
    for i in range(1, n):
        x = Fraction(i, 2 * n)
        # tent profile 0 -> amplitude -> 0 over [0, 1/2]
        y = amplitude * (1 - abs(Fraction(2 * i, n) - 1))
        half.append((x, y))
    pts = [(Fraction(0), Fraction(0))] + half + [(Fraction(1, 2), Fraction(0))]
    pts += [(1 - x, -y) for x, y in reversed(half)] + [(Fraction(1), Fraction(0))]
    return CurveSpec(tuple(pts), S_CURVE)


def asymmetric_curve() -> CurveSpec:
    """A lopsided single bump, usable with the alternating scheme only."""
    pts = [(0, 0), (Fraction(1, 5), Fraction(1, 8)), (Fraction(1, 2), Fraction(1, 6)),
           (Fraction(3, 5), Fraction(1, 12)), (1, 0)]
    return CurveSpec(tuple(pts), FREE)


def straight_curve() -> CurveSpec:
    return CurveSpec(((0, 0), (Fraction(1, 2), 0), (1, 0)), S_CURVE)


def _place_curve(pts, start: Coord4, d: int, scale: int) -> list[Coord4]:
    """Map edge-frame samples onto the unit edge from ``start`` along u(d), scaled."""
    out = []
    for x, y in pts:
        X, Y = x * scale, y * scale
        if X.denominator != 1 or Y.denominator != 1:
            raise ValueError("scale does not clear the curve denominators")
        out.append(start * scale + unit(d) * int(X) + unit(d + 3) * int(Y))
    return out


@dataclass(frozen=True)
class SpectreBoundary:
    """Curved boundary: vertex positions are ``scale`` times the true ones."""

    points: tuple[Coord4, ...]
    scale: int
    edge_starts: tuple[int, ...]

    @property
    def polygon(self) -> Polygon:
        return Polygon(self.points)

    def edge_piece(self, i: int) -> tuple[Coord4, ...]:
        n = len(self.points)
        a = self.edge_starts[i]
        b = self.edge_starts[(i + 1) % len(self.edge_starts)]
        if b <= a:
            b += n
        return tuple(self.points[j % n] for j in range(a, b + 1))

    def to_float(self):
        return [(x / self.scale, y / self.scale) for x, y in (p.to_float() for p in self.points)]


def edge_curves(curve: CurveSpec, scheme: str):
    """Per-edge sample lists for the 14 edges of Tile(1,1)."""
    pts = curve.samples
    inv = inverse_curve(pts)
    if scheme == SCHEME_S:
        if curve.kind != S_CURVE:
            raise ValueError("s-curve scheme needs a curve of kind s-curve")
        return [pts] * len(EDGE_WORD)
    if scheme == SCHEME_ALT:
        return [pts if i % 2 == 0 else inv for i in range(len(EDGE_WORD))]
    raise ValueError(f"unknown scheme {scheme!r}")


def apply_edge_curve(curve: CurveSpec, scheme: str = SCHEME_S,
                     base: Polygon = TILE11) -> SpectreBoundary:
    """Replace each unit edge of Tile(1,1) by a fitted copy of ``curve``.

    Raises ValueError for a straight curve or when the result is not a
    simple closed curve.
    """
    if curve.straight:
        raise ValueError("curve must be non-straight")
    per_edge = edge_curves(curve, scheme)
    scale = curve.denominator
    vs = base.vertices
    points: list[Coord4] = []
    starts = []
    for i, v in enumerate(vs):
        d = direction_index(vs[(i + 1) % len(vs)] - v)[0]
        placed = _place_curve(per_edge[i], v, d, scale)
        starts.append(len(points))
        points.extend(placed[:-1])
    boundary = SpectreBoundary(tuple(points), scale, tuple(starts))
    if not is_simple(boundary.polygon):
        raise ValueError("curve does not produce a topological disk")
    return boundary


def _reflected_boundary(b: SpectreBoundary) -> list[Coord4]:
    from .geometry import reflect_y
    return [reflect_y(p) for p in b.points]


@dataclass
class BlockingReport:
    blocked: bool
    reflected_matches: list[tuple[int, int]]
    chiral_matches: list[tuple[int, int]]
    pairs_checked: int


def _piece_keys(pts) -> tuple:
    return tuple(p.key() for p in pts)


def check_reflection_blocking(curve: CurveSpec, scheme: str = SCHEME_S) -> BlockingReport:
    """Try every edge of a reflected copy against every edge of an unreflected one.

    For each of the 14x14 pairings the reflected tile is moved so that its
    edge runs back along the unreflected tile's edge (as neighbours must),
    and the two curve pieces are compared exactly.  ``blocked`` is True when
    no pairing lines up.  Matches between two unreflected copies are
    reported too, as a sanity reference.
    """
    vs = TILE11.vertices
    n = len(vs)
    straight = curve.straight
    if straight:
        per_edge = [curve.samples] * n
        scale = curve.denominator
        pieces = []
        for i, v in enumerate(vs):
            d = direction_index(vs[(i + 1) % n] - v)[0]
            pieces.append(_place_curve(per_edge[i], v, d, scale))
    else:
        bnd = apply_edge_curve(curve, scheme)
        scale = bnd.scale
        pieces = [list(bnd.edge_piece(i)) for i in range(n)]

    def mates(reflect: bool):
        found = []
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            mine = {p.key() for p in pieces[i]}
            for j in range(n):
                c, d = vs[j], vs[(j + 1) % n]
                # g maps c -> b, d -> a (edge j traversed backwards)
                for rot in range(12):
                    g0 = Isometry(rot, reflect, ORIGIN)
                    if g0.apply(d) - g0.apply(c) == a - b:
                        g = Isometry(rot, reflect, b * scale - g0.apply(c * scale))
                        other = {g.apply(p).key() for p in pieces[j]}
                        if other == mine:
                            found.append((i, j))
                        break
        return found

    refl = mates(True)
    chiral = mates(False)
    return BlockingReport(not refl, refl, chiral, n * n)


# ---------------------------------------------------------------------------
# kite-grid embeddings of hat and turtle


def grid_shape_isometry(name: str) -> Isometry:
    """Isometry taking the base polygon of ``name`` onto its kite-grid outline."""
    cells = HAT_CELLS if name == "hat" else TURTLE_CELLS
    target = Polygon(kitegrid.boundary_cycle(kitegrid.pack(*c) for c in cells))
    g = congruence(base_polygon(name), target, allow_reflection=False)
    if g is None:
        raise AssertionError(f"{name} kites do not match Tile(a,b)")
    return g


def polykite_to_placed(name: str, pose: kitegrid.GridPose) -> PlacedTile:
    g = kitegrid.pose_isometry(pose) @ grid_shape_isometry(name)
    return PlacedTile(name, g)


def tile_area(shape: str) -> QSqrt3:
    return polygon_area(base_polygon(shape))


__all__ = [
    "EDGE_WORD", "EVEN", "HAT", "HAT_CELLS", "ODD", "Patch", "PlacedTile",
    "TILE11", "TURTLE", "TURTLE_CELLS", "CurveSpec", "SpectreBoundary",
    "apply_edge_curve", "asymmetric_curve", "build_tile_ab", "check_reflection_blocking",
    "classify_parity", "default_s_curve", "derive_edge_word", "interior_angles",
    "resize_edges", "straight_curve", "transport_vector",
]
