"""Chained key-point assembly of Spectre and Mystic clusters.

A Spectre cluster is eight units placed around a ring: seven Spectre
clusters of the level below and one Mystic cluster.  The Mystic cluster
is the same ring with slot :data:`DROPPED_SLOT` left empty.  Each unit is
turned by a fixed relative angle and then translated so that one of its
key points lands on a key point of the unit placed just before it.
Every placement is finally mirrored, so handedness flips at each level.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterator

from .geometry import (
    Coord4, IDENTITY, Isometry, ORIGIN, Polygon, QSqrt3, overlapping_pairs,
    polygons_interior_disjoint, vertex_to_vertex_violations,
)
from .tiles import ODD, PlacedTile, Patch, TILE11, classify_parity

SPECTRE, MYSTIC = "spectre", "mystic"

# vertex indices of Tile(1,1) used as the four key points
KEYPOINT_VERTICES = (9, 7, 5, 1)

# (turn in degrees relative to the previous unit, key point of the previous
# unit, key point of the new unit) for ring slots 1..7
CHAIN_RULES = ((-60, 3, 1), (0, 2, 0), (-60, 3, 1), (-60, 3, 1),
               (0, 2, 0), (-60, 3, 1), (120, 3, 3))

# the cluster's own key points, as (ring slot, key point index)
EXPORTED_KEYPOINTS = ((6, 2), (5, 1), (3, 2), (0, 1))

MYSTIC_SLOT = 7
DROPPED_SLOT = 2

# mirror applied to every placement of a level
LEVEL_MIRROR = Isometry(6, True, ORIGIN)

# the odd half of a Mystic relative to its even half
MYSTIC_ODD_POSE = Isometry(11, False, Coord4(2, 0, -1, 0))


@dataclass(frozen=True)
class AssemblyUnit:
    kind: str
    level: int
    keypoints: tuple[Coord4, Coord4, Coord4, Coord4]
    children: tuple[tuple["AssemblyUnit", Isometry], ...] = ()
    handedness: str = "unreflected"

    @property
    def unit_count(self) -> int:
        return len(self.children) if self.level > 0 else 1

    def spectres(self) -> Iterator[Isometry]:
        """Poses of all level-0 Spectres inside, in a fixed depth-first order."""
        yield from (g for g, _ in self._leaves(IDENTITY))

    def placed(self) -> list[PlacedTile]:
        out = []
        for g, tag in self._leaves(IDENTITY):
            out.append(PlacedTile("spectre", g, tag))
        return out

    def _leaves(self, g: Isometry):
        if self.level == 0:
            if self.kind == SPECTRE:
                yield g, "spectre"
            else:
                yield g, "mystic-even"
                yield g @ MYSTIC_ODD_POSE, "mystic-odd"
            return
        for child, h in self.children:
            yield from child._leaves(g @ h)

    def patch(self) -> Patch:
        return Patch(self.placed())


def initial_keypoints(base: Polygon = TILE11) -> tuple[Coord4, ...]:
    return tuple(base.vertices[i] for i in KEYPOINT_VERTICES)


def _turn(deg: int) -> Isometry:
    if deg % 30:
        raise ValueError("turns must be multiples of 30 degrees")
    return Isometry((deg // 30) % 12, False, ORIGIN)


def chain_placements(quad, rules=CHAIN_RULES, mirror: Isometry = LEVEL_MIRROR) -> list[Isometry]:
    """Ring placements for units with key points ``quad``."""
    placements = [IDENTITY]
    total = 0
    for deg, prev_kp, new_kp in rules:
        total += deg
        turn = _turn(total)
        shift = placements[-1].apply(quad[prev_kp]) - turn.apply(quad[new_kp])
        placements.append(Isometry(turn.rot, False, shift))
    return [mirror @ t for t in placements]


def exported_keypoints(placements, quad, export=EXPORTED_KEYPOINTS):
    return tuple(placements[slot].apply(quad[k]) for slot, k in export)


def base_units(base: Polygon = TILE11) -> tuple[AssemblyUnit, AssemblyUnit]:
    quad = initial_keypoints(base)
    return (AssemblyUnit(SPECTRE, 0, quad), AssemblyUnit(MYSTIC, 0, quad))


def assemble_cluster(kind: str, spectre: AssemblyUnit, mystic: AssemblyUnit,
                     check: bool = False) -> AssemblyUnit:
    """One level up: a Spectre or Mystic cluster from the units below."""
    if spectre.keypoints != mystic.keypoints:
        raise ValueError("Spectre and Mystic units must share key points")
    quad = spectre.keypoints
    ts = chain_placements(quad)
    children = []
    for slot, g in enumerate(ts):
        if kind == MYSTIC and slot == DROPPED_SLOT:
            continue
        children.append((mystic if slot == MYSTIC_SLOT else spectre, g))
    hand = "reflected" if spectre.handedness == "unreflected" else "unreflected"
    unit = AssemblyUnit(kind, spectre.level + 1, exported_keypoints(ts, quad),
                        tuple(children), hand)
    if check and unit.level == 1:
        polys = [TILE11.transformed(g) for g in unit.spectres()]
        if overlapping_pairs(polys):
            raise ValueError("cluster tiles overlap: bad chain constants")
    return unit


@lru_cache(maxsize=None)
def iterate(levels: int, seed: str = SPECTRE) -> AssemblyUnit:
    """Level ``levels`` cluster grown from a Spectre or Mystic seed."""
    if levels < 0:
        raise ValueError("levels must be non-negative")
    s, m = _level_pair(levels)
    if seed == SPECTRE:
        return s
    if seed == MYSTIC:
        return m
    raise ValueError(f"unknown seed {seed!r}")


@lru_cache(maxsize=None)
def _level_pair(levels: int) -> tuple[AssemblyUnit, AssemblyUnit]:
    if levels == 0:
        return base_units()
    s, m = _level_pair(levels - 1)
    return assemble_cluster(SPECTRE, s, m), assemble_cluster(MYSTIC, s, m)


def keypoint_chain_shares(unit: AssemblyUnit) -> list[int]:
    """For each child, how many of its key points coincide with another child's."""
    pts = [[g.apply(k).key() for k in child.keypoints] for child, g in unit.children]
    out = []
    for i, mine in enumerate(pts):
        others = {k for j, ks in enumerate(pts) if j != i for k in ks}
        out.append(sum(1 for k in mine if k in others))
    return out


# ---------------------------------------------------------------------------
# counts and statistics


SUBST_MATRIX = ((7, 6), (1, 1))


def count_vector(levels: int, seed: str = SPECTRE) -> tuple[int, int]:
    """(lone Spectres, Mystics) at the given level, by matrix powers."""
    v = (1, 0) if seed == SPECTRE else (0, 1)
    (a, b), (c, d) = SUBST_MATRIX
    for _ in range(levels):
        v = (a * v[0] + b * v[1], c * v[0] + d * v[1])
    return v


@dataclass(frozen=True)
class Surd:
    """a + b*sqrt(r) with rational a, b."""

    a: Fraction
    b: Fraction
    r: int

    def __float__(self):
        return float(self.a) + float(self.b) * self.r ** 0.5

    def __mul__(self, o: "Surd") -> "Surd":
        assert o.r == self.r
        return Surd(self.a * o.a + self.r * self.b * o.b, self.a * o.b + self.b * o.a, self.r)

    def __add__(self, o: "Surd") -> "Surd":
        assert o.r == self.r
        return Surd(self.a + o.a, self.b + o.b, self.r)

    def __repr__(self):
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*sqrt({self.r})"


def subst_matrix_eigen(m=SUBST_MATRIX) -> tuple[Surd, Surd]:
    """Exact eigenvalues of a 2x2 integer matrix with a non-square discriminant."""
    (a, b), (c, d) = m
    tr, det = a + d, a * d - b * c
    disc = tr * tr - 4 * det
    # factor squares out of the discriminant
    s, r = 1, disc
    f = 2
    while f * f <= r:
        while r % (f * f) == 0:
            r //= f * f
            s *= f
        f += 1
    half = Fraction(tr, 2)
    rad = Fraction(s, 2)
    return Surd(half, rad, r), Surd(half, -rad, r)


@dataclass
class Stats:
    level: int
    spectres: int
    even: int
    odd: int
    mystics: int
    reflected: int
    area: QSqrt3
    ratio: float = field(init=False)

    def __post_init__(self):
        self.ratio = self.even / self.odd if self.odd else float("inf")


def stats(unit: AssemblyUnit) -> Stats:
    tiles = unit.placed()
    odd = sum(1 for t in tiles if classify_parity(t) == ODD)
    mystics = sum(1 for t in tiles if t.tag == "mystic-odd")
    refl = sum(1 for t in tiles if t.pose.reflect)
    from .tiles import tile_area
    area = tile_area("tile11") * len(tiles)
    return Stats(unit.level, len(tiles), len(tiles) - odd, odd, mystics, refl, area)


def ratio_sequence(levels: int, seed: str = SPECTRE) -> list[Fraction]:
    """Even:odd Spectre ratio per level, from the count recurrence."""
    out = []
    for n in range(1, levels + 1):
        lone, myst = count_vector(n, seed)
        out.append(Fraction(lone + myst, myst))
    return out


def area_ratio_sequence(levels: int, seed: str = SPECTRE) -> list[Fraction]:
    out = []
    prev = None
    for n in range(levels + 1):
        lone, myst = count_vector(n, seed)
        tot = lone + 2 * myst
        if prev:
            out.append(Fraction(tot, prev))
        prev = tot
    return out


def normalized_quad(unit: AssemblyUnit) -> list[complex]:
    """Key-point quadrilateral up to orientation-preserving similarity.

    The exported key points swap cyclic order whenever handedness flips, so
    no extra mirroring is needed to compare consecutive levels.
    """
    z = [complex(*p.to_float()) for p in unit.keypoints]
    return [(p - z[0]) / (z[1] - z[0]) for p in z]


# ---------------------------------------------------------------------------
# soundness checks


@dataclass
class SoundnessReport:
    tiles: int
    overlaps: list
    v2v_violations: list
    long_segments: int
    handedness: set

    @property
    def ok(self) -> bool:
        return (not self.overlaps and not self.v2v_violations
                and self.long_segments == 0 and len(self.handedness) == 1)


def max_straight_runs(P: Polygon) -> list[int]:
    """Lengths (in edges) of maximal runs of parallel consecutive boundary edges."""
    from .geometry import direction_index
    dirs = [direction_index(e)[0] for e in P.edges()]
    n = len(dirs)
    start = next((i for i in range(n) if dirs[i] != dirs[i - 1]), 0)
    runs, cur = [], 1
    for step in range(1, n + 1):
        i = (start + step) % n
        if dirs[i] == dirs[(i - 1) % n] and step < n:
            cur += 1
        else:
            runs.append(cur)
            cur = 1
    return runs


def soundness(unit: AssemblyUnit) -> SoundnessReport:
    polys = [TILE11.transformed(g) for g in unit.spectres()]
    over = overlapping_pairs(polys)
    v2v = vertex_to_vertex_violations(polys)
    longs = sum(1 for P in polys for r in max_straight_runs(P) if r > 2)
    hand = {g.reflect for g in unit.spectres()}
    return SoundnessReport(len(polys), over, v2v, longs, hand)


# ---------------------------------------------------------------------------
# key point derivation


def derive_keypoints(base: Polygon = TILE11, rules=CHAIN_RULES, limit: int | None = None):
    """Ordered vertex 4-tuples for which the chain yields overlap-free clusters.

    A candidate must give an overlap-free level-1 Spectre cluster whose
    exported key points, fed back in, give an overlap-free level-2 cluster.
    Candidates are grown slot by slot and pruned on the first overlap.
    """
    vs = base.vertices
    n = len(vs)
    found = []
    for combo in permutations(range(n), 4):
        quad = [vs[i] for i in combo]
        if not _ring_ok(base, quad, rules):
            continue
        if not _level2_ok(base, quad, rules):
            continue
        found.append(combo)
        if limit and len(found) >= limit:
            break
    return found


def _ring_ok(base: Polygon, quad, rules) -> bool:
    placed: list[Polygon] = []
    ts = chain_placements(quad, rules, IDENTITY)
    for slot, g in enumerate(ts):
        polys = [base.transformed(g)]
        if slot == MYSTIC_SLOT:
            polys.append(base.transformed(g @ MYSTIC_ODD_POSE))
        for P in polys:
            if any(not polygons_interior_disjoint(P, Q) for Q in placed):
                return False
            placed.append(P)
    # the chain must close: the last unit's key point 3... touches the first
    return True


def _level2_ok(base: Polygon, quad, rules) -> bool:
    s0 = AssemblyUnit(SPECTRE, 0, tuple(quad))
    m0 = AssemblyUnit(MYSTIC, 0, tuple(quad))
    s1 = assemble_cluster(SPECTRE, s0, m0)
    m1 = assemble_cluster(MYSTIC, s0, m0)
    s2 = assemble_cluster(SPECTRE, s1, m1)
    polys = [base.transformed(g) for g in s2.spectres()]
    return not overlapping_pairs(polys)


__all__ = [
    "AssemblyUnit", "CHAIN_RULES", "EXPORTED_KEYPOINTS", "KEYPOINT_VERTICES",
    "MYSTIC", "SPECTRE", "SUBST_MATRIX", "Stats", "assemble_cluster",
    "count_vector", "derive_keypoints", "initial_keypoints", "iterate",
    "keypoint_chain_shares", "normalized_quad", "ratio_sequence", "soundness",
    "stats", "subst_matrix_eigen",
]
