"""The Laves [3.4.6.4] kite grid and polykites on it.

A kite is addressed by ``(i, j, k)``: the hexagon centred at
``i*A + j*B`` (``A = 2u(0) + 2u(2)``, ``B = A`` turned by 60 degrees) and
the kite index ``k`` in 0..5, kite ``k`` being the one around hexagon
vertex ``2u(2k)``.  Short kite edges (length 1) point in even 30-degree
directions and long ones (length sqrt3) in odd directions.

Cells are packed into ints so that translating a cell set is an integer
addition, which keeps the enumeration loops cheap.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .geometry import Coord4, ORIGIN, Polygon, rotate30, unit

HEX_A = Coord4(2, 0, 2, 0)
HEX_B = rotate30(HEX_A, 2)

_SPAN = 1 << 11
_OFF = 1 << 10


def pack(i: int, j: int, k: int) -> int:
    return (((i + _OFF) * _SPAN) + (j + _OFF)) * 8 + k


def unpack(cid: int) -> tuple[int, int, int]:
    k = cid & 7
    rest = cid >> 3
    return rest // _SPAN - _OFF, rest % _SPAN - _OFF, k


def shift(i: int, j: int) -> int:
    """Packed offset of a translation by i*A + j*B."""
    return (i * _SPAN + j) * 8


def hex_center(i: int, j: int) -> Coord4:
    return HEX_A * i + HEX_B * j


def _long(j: int) -> Coord4:
    return unit(j - 1) + unit(j + 1)


def kite_vertices(i: int, j: int, k: int) -> list[Coord4]:
    """Counterclockwise: centre, edge midpoint, hexagon vertex, edge midpoint."""
    c = hex_center(i, j)
    return [c, c + _long(2 * k - 1), c + unit(2 * k) * 2, c + _long(2 * k + 1)]


def kite_polygon(cid: int) -> Polygon:
    return Polygon(kite_vertices(*unpack(cid)))


def rotate_cell(cell: Sequence[int], r: int = 1) -> tuple[int, int, int]:
    """Rotate by 60r degrees about the origin hexagon centre."""
    i, j, k = cell
    for _ in range(r % 6):
        i, j, k = -j, i + j, (k + 1) % 6
    return i, j, k


def reflect_cell(cell: Sequence[int]) -> tuple[int, int, int]:
    """Mirror in the x axis (u(k) -> u(-k))."""
    i, j, k = cell
    # A (30 degrees) mirrors to A - B, B (90 degrees) to -B
    return i, -i - j, (-k) % 6


@lru_cache(maxsize=1 << 16)
def kite_vertex_keys(cid: int) -> tuple[tuple[int, int, int, int], ...]:
    return tuple(v.key() for v in kite_vertices(*unpack(cid)))


def _local_kites_around_vertex_types():
    """Cells sharing a vertex with kite (0,0,k), as packed offsets per k.

    Found by brute force over a small window using exact vertex keys.
    """
    table = {}
    window = [pack(i, j, k) for i in range(-3, 4) for j in range(-3, 4) for k in range(6)]
    by_vertex: dict = {}
    for cid in window:
        for key in kite_vertex_keys(cid):
            by_vertex.setdefault(key, set()).add(cid)
    for k in range(6):
        me = pack(0, 0, k)
        near = set()
        for key in kite_vertex_keys(me):
            near |= by_vertex[key]
        near.discard(me)
        table[k] = tuple(sorted(c - pack(0, 0, 0) for c in near))
    return table


_NEIGHBOUR_OFFSETS = _local_kites_around_vertex_types()


def vertex_neighbours(cid: int) -> tuple[int, ...]:
    """Kites sharing at least one point with the given kite (excluding it)."""
    base = cid - (cid & 7)
    return tuple(base + off for off in _NEIGHBOUR_OFFSETS[cid & 7])


def halo(cells: Iterable[int]) -> set[int]:
    cells = set(cells)
    out: set[int] = set()
    for c in cells:
        out.update(vertex_neighbours(c))
    out -= cells
    return out


def boundary_cycle(cells: Iterable[int]) -> list[Coord4]:
    """Counterclockwise boundary vertex cycle of a simply connected kite union.

    Every kite edge on the boundary becomes one polygon edge, so a straight
    run made of two kite edges keeps its middle vertex.
    """
    directed = {}
    for cid in cells:
        vs = kite_vertices(*unpack(cid))
        for a, b in zip(vs, vs[1:] + vs[:1]):
            directed[(a.key(), b.key())] = (a, b)
    boundary = {ka: (a, b) for (ka, kb), (a, b) in directed.items()
                if (kb, ka) not in directed}
    if not boundary:
        raise ValueError("empty cell set")
    start = min(boundary)
    cycle = []
    cur = start
    for _ in range(len(boundary) + 1):
        a, b = boundary[cur]
        cycle.append(a)
        cur = b.key()
        if cur == start:
            break
    if len(cycle) != len(boundary):
        raise ValueError("kite union is not a disk (multiple boundary loops)")
    return cycle


# ---------------------------------------------------------------------------
# Polykites


class Shape(NamedTuple):
    name: str
    cells: tuple[tuple[int, int, int], ...]


class GridPose(NamedTuple):
    rot: int
    ti: int
    tj: int
    reflect: bool = False


def oriented_cells(cells: Iterable[Sequence[int]], rot: int, reflect: bool = False):
    out = []
    for c in cells:
        if reflect:
            c = reflect_cell(c)
        out.append(rotate_cell(c, rot))
    return out


def placed_cells(cells, pose: GridPose) -> frozenset[int]:
    off = shift(pose.ti, pose.tj)
    return frozenset(pack(*c) + off for c in oriented_cells(cells, pose.rot, pose.reflect))


def pose_compose(g: GridPose, h: GridPose) -> GridPose:
    """g after h, for grid poses (reflection applied first, then rotation)."""
    ti, tj, _ = rotate_cell((h.ti, h.tj, 0) if not g.reflect
                            else reflect_cell((h.ti, h.tj, 0)), g.rot)
    rot = (g.rot - h.rot if g.reflect else g.rot + h.rot) % 6
    return GridPose(rot, ti + g.ti, tj + g.tj, g.reflect != h.reflect)


def pose_inverse(g: GridPose) -> GridPose:
    if g.reflect:
        lin = GridPose(g.rot, 0, 0, True)
    else:
        lin = GridPose((-g.rot) % 6, 0, 0, False)
    ti, tj, _ = rotate_cell(reflect_cell((g.ti, g.tj, 0)) if lin.reflect
                            else (g.ti, g.tj, 0), lin.rot)
    return GridPose(lin.rot, -ti, -tj, lin.reflect)


def pose_isometry(pose: GridPose):
    """The plane isometry of a grid pose (kite-grid rotations are 60 degrees)."""
    from .geometry import Isometry
    return Isometry((2 * pose.rot) % 12, pose.reflect, hex_center(pose.ti, pose.tj))


def shape_from_cells(name: str, cells: Iterable[Sequence[int]]) -> Shape:
    return Shape(name, tuple(sorted(tuple(c) for c in cells)))


def outline(shape: Shape, pose: GridPose = GridPose(0, 0, 0)) -> Polygon:
    return Polygon(boundary_cycle(placed_cells(shape.cells, pose)))


def covering_poses(shape: Shape, cid: int, reflect: bool = False):
    """All poses of ``shape`` (fixed handedness) that cover kite ``cid``."""
    ci, cj, ck = unpack(cid)
    for rot in range(6):
        for (i, j, k) in oriented_cells(shape.cells, rot, reflect):
            if k == ck:
                yield GridPose(rot, ci - i, cj - j, reflect)


__all__ = [
    "HEX_A", "HEX_B", "GridPose", "Shape", "boundary_cycle", "covering_poses",
    "halo", "hex_center", "oriented_cells", "kite_polygon", "kite_vertices", "outline", "pack",
    "placed_cells", "pose_compose", "pose_inverse", "pose_isometry",
    "reflect_cell", "rotate_cell", "shape_from_cells", "shift", "unpack",
    "vertex_neighbours", "ORIGIN",
]
