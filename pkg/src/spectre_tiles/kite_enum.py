"""Corona enumeration and reduction for polykites on the kite grid.

A tile system is a set of polykites (hats, turtles, or composites made
of them).  A 1-patch is a tile at the identity pose together with a
corona: tiles covering every kite that touches it.  Reduction removes
patches that cannot be extended, testing each corona tile by
superimposing the centre of some surviving patch, until nothing changes.

Composite stages (turtle + hats clusters) reuse the same machinery with
a base-level filter: any two touching hats/turtles inside a composite
patch must form a pair seen in the reduced hat/turtle lists.
"""
from __future__ import annotations

import hashlib
import os
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence

from . import kitegrid as kg
from .kitegrid import GridPose, halo, pack, unpack

ORG = pack(0, 0, 0)


class Placement(NamedTuple):
    name: str
    rot: int = 0
    ti: int = 0
    tj: int = 0
    reflect: bool = False

    @property
    def pose(self) -> GridPose:
        return GridPose(self.rot, self.ti, self.tj, self.reflect)


def _with_pose(name: str, pose: GridPose) -> Placement:
    return Placement(name, pose.rot % 6, pose.ti, pose.tj, pose.reflect)


def act(g: GridPose, p: Placement) -> Placement:
    """Image of a placement under the grid pose g."""
    return _with_pose(p.name, kg.pose_compose(g, p.pose))


def relative(a: Placement, b: Placement) -> Placement:
    """b seen from the frame of a."""
    return _with_pose(b.name, kg.pose_compose(kg.pose_inverse(a.pose), b.pose))


IDENTITY_POSE = GridPose(0, 0, 0, False)


@dataclass(frozen=True)
class Polykite:
    """A polykite, possibly a cluster of hats and turtles given by ``members``."""

    name: str
    cells: tuple[tuple[int, int, int], ...]
    members: tuple[Placement, ...] = ()

    @property
    def base_members(self) -> tuple[Placement, ...]:
        return self.members or (Placement(self.name),)

    @property
    def size(self) -> int:
        return len(self.cells)


def composite(name: str, parts: Iterable[tuple[Polykite, GridPose]]) -> Polykite:
    """Union of placed polykites, flattened to hats and turtles."""
    cells: set = set()
    members = []
    for pk, pose in parts:
        cs = kg.placed_cells(pk.cells, pose)
        if cells & cs:
            raise ValueError("composite parts overlap")
        cells |= cs
        for m in pk.base_members:
            members.append(act(pose, m))
    return Polykite(name, tuple(sorted(unpack(c) for c in cells)), tuple(sorted(members)))


def hat() -> Polykite:
    from .tiles import HAT_CELLS
    return Polykite("hat", tuple(sorted(HAT_CELLS)))


def turtle() -> Polykite:
    from .tiles import TURTLE_CELLS
    return Polykite("turtle", tuple(sorted(TURTLE_CELLS)))


PairFilter = Callable[[Placement, Placement], bool]


class TileSystem:
    """Polykites plus the tables used by the corona search."""

    def __init__(self, tiles: Sequence[Polykite], chiral: bool = True,
                 pair_filter: PairFilter | None = None):
        self.tiles = {t.name: t for t in tiles}
        self.chiral = chiral
        self.pair_filter = pair_filter
        refls = (False,) if chiral else (False, True)
        self.offsets: dict = {}
        self._halo: dict = {}
        self._cells: dict = {}
        self.cover: dict = {k: [] for k in range(6)}
        for t in tiles:
            for refl in refls:
                for rot in range(6):
                    cl = tuple(sorted(pack(*c) - ORG for c in kg.oriented_cells(t.cells, rot, refl)))
                    self.offsets[(t.name, rot, refl)] = cl
                    for c in cl:
                        self.cover[(c + ORG) & 7].append((t.name, rot, refl, c))

    def names(self) -> list[str]:
        return sorted(self.tiles)

    def cells(self, p: Placement) -> frozenset[int]:
        hit = self._cells.get(p)
        if hit is None:
            base = ORG + kg.shift(p.ti, p.tj)
            hit = frozenset(base + c for c in self.offsets[(p.name, p.rot, p.reflect)])
            if len(self._cells) > 1 << 20:
                self._cells.clear()
            self._cells[p] = hit
        return hit

    def candidates(self, cid: int) -> Iterable[tuple[Placement, tuple[int, ...]]]:
        """Placements that cover kite ``cid``, with their cells."""
        for name, rot, refl, c in self.cover[cid & 7]:
            base = cid - c
            ti, tj, _ = unpack(base)
            yield Placement(name, rot, ti, tj, refl), tuple(base + x for x in
                                                            self.offsets[(name, rot, refl)])

    def halo_of(self, p: Placement) -> frozenset:
        key = (p.name, p.rot, p.reflect)
        off = self._halo.get(key)
        if off is None:
            cells = [ORG + c for c in self.offsets[key]]
            off = tuple(sorted(h - ORG for h in halo(cells)))
            self._halo[key] = off
        base = ORG + kg.shift(p.ti, p.tj)
        return frozenset(base + c for c in off)

    def touching(self, a_cells, b_cells) -> bool:
        return not halo(a_cells).isdisjoint(b_cells)

    def members(self, p: Placement) -> list[Placement]:
        return [act(p.pose, m) for m in self.tiles[p.name].base_members]


# ---------------------------------------------------------------------------
# k-patches


@dataclass(frozen=True)
class KPatch:
    """A centre tile at the identity pose plus k rings of tiles."""

    center: Placement
    rings: tuple[frozenset, ...]

    @property
    def k(self) -> int:
        return len(self.rings)

    @property
    def corona(self) -> frozenset:
        return self.rings[0]

    def tiles(self) -> list[Placement]:
        out = [self.center]
        for r in self.rings:
            out.extend(sorted(r))
        return out

    def key(self) -> tuple:
        return (self.center, tuple(tuple(sorted(r)) for r in self.rings))

    def shape_counts(self, ring: int = 0) -> Counter:
        return Counter(p.name for p in self.rings[ring])


@dataclass
class KPatchList:
    k: int
    system: TileSystem
    patches: list[KPatch]
    reduced: bool = False
    stats: dict = field(default_factory=dict)

    def by_center(self) -> dict[str, list[KPatch]]:
        out: dict = defaultdict(list)
        for p in self.patches:
            out[p.center.name].append(p)
        return dict(out)

    def sizes(self) -> dict[str, int]:
        return {n: len(v) for n, v in sorted(self.by_center().items())}

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for p in sorted(self.patches, key=KPatch.key):
            h.update(repr(p.key()).encode())
        return h.hexdigest()


def _corona_search(system: TileSystem, center: Placement, node_limit: int | None = None):
    """All coronas of ``center`` (sets of placements), by MRV backtracking.

    Each uncovered halo kite keeps a domain of placements still compatible
    with everything placed; placing a tile filters the domains (forward
    checking) and the smallest domain is branched on next.
    """
    ccells = frozenset(system.cells(center))
    required = sorted(halo(ccells))
    filt = system.pair_filter
    results = []
    nodes = 0

    def ok_with(p, pcells, q, qcells, qhalo):
        if not qcells.isdisjoint(pcells):
            return False
        if filt is not None and not qhalo.isdisjoint(pcells) and not filt(q, p):
            return False
        return True

    chalo = system.halo_of(center)
    domains = {}
    for cid in required:
        dom = []
        for p, cells in system.candidates(cid):
            cells = frozenset(cells)
            if ok_with(p, cells, center, ccells, chalo):
                dom.append((p, cells))
        domains[cid] = dom

    def rec(domains, placed):
        nonlocal nodes
        nodes += 1
        if node_limit and nodes > node_limit:
            raise RuntimeError("corona search exceeded its node limit")
        if not domains:
            results.append(frozenset(placed))
            return
        cid = min(domains, key=lambda c: (len(domains[c]), c))
        for p, cells in domains[cid]:
            phalo = system.halo_of(p)
            nxt = {}
            dead = False
            for c2, dom in domains.items():
                if c2 in cells:
                    continue
                nd = [(q, qc) for q, qc in dom if ok_with(q, qc, p, cells, phalo)]
                if not nd:
                    dead = True
                    break
                nxt[c2] = nd
            if dead:
                continue
            placed.append(p)
            rec(nxt, placed)
            placed.pop()

    if all(domains.values()):
        rec(domains, [])
    return results, nodes


def enumerate_1patches(system: TileSystem, centers: Sequence[str] | None = None) -> KPatchList:
    """Every corona of every centre shape (centre unreflected at the identity)."""
    patches = []
    stats = {}
    for name in centers or system.names():
        c = Placement(name)
        found, nodes = _corona_search(system, c)
        stats[name] = {"raw": len(found), "nodes": nodes}
        patches.extend(KPatch(c, (f,)) for f in found)
    patches.sort(key=KPatch.key)
    return KPatchList(1, system, patches, False, stats)


def legal_pairs(system: TileSystem, patches: KPatchList | None = None) -> dict[str, frozenset]:
    """Relative placements of touching neighbours seen in a patch list, per centre shape.

    With no list given, the raw 1-patch enumeration is used, which is the
    one-corona extendability probe: a neighbour is kept only if some full
    corona of the centre contains it.
    """
    if patches is None:
        patches = enumerate_1patches(system)
    out: dict = defaultdict(set)
    for p in patches.patches:
        for q in p.corona:
            out[p.center.name].add(q)
    return {k: frozenset(v) for k, v in out.items()}


def count_pairs(pairs: dict[str, frozenset]) -> dict[tuple[str, str], int]:
    """Unordered shape-pair counts: each unordered relation counted once."""
    seen = set()
    counts: Counter = Counter()
    for cname, rels in pairs.items():
        for q in rels:
            back = relative(q, Placement(cname))
            key = (cname, q)
            if (q.name, back) in seen:
                continue
            seen.add(key)
            counts[tuple(sorted((cname, q.name)))] += 1
    return dict(counts)


# ---------------------------------------------------------------------------
# reduction


def _occupancy(system: TileSystem, placements: Iterable[Placement]) -> frozenset:
    occ: set = set()
    for p in placements:
        occ.update(system.cells(p))
    return frozenset(occ)


def _compatible(system: TileSystem, tiles: Iterable[Placement], q_tiles: frozenset,
                q_occ: frozenset) -> bool:
    """Each tile is either present in Q or avoids Q's cells."""
    for x in tiles:
        if x in q_tiles:
            continue
        if not q_occ.isdisjoint(system.cells(x)):
            return False
    return True


def reduce(plist: KPatchList, order_seed: int | None = None) -> KPatchList:
    """Drop patches with a corona tile that no surviving patch can be centred on.

    For corona tile T of patch P, P is moved into T's frame and must agree
    with some surviving patch Q whose centre has T's shape: every tile of
    the moved P lies in Q or is cell-disjoint from Q's tiles.  Sweeps repeat
    until a fixed point.  ``order_seed`` shuffles the processing order, for
    confluence checks.
    """
    system = plist.system
    pats = list(plist.patches)
    alive = set(range(len(pats)))
    data = []
    for p in pats:
        tiles = frozenset(p.tiles())
        data.append((tiles, _occupancy(system, tiles)))
    order = list(range(len(pats)))
    if order_seed is not None:
        random.Random(order_seed).shuffle(order)
    sweeps = 0
    changed = True
    while changed:
        changed = False
        sweeps += 1
        index: dict = defaultdict(list)
        for qi in alive:
            for t in pats[qi].corona:
                index[(pats[qi].center.name, t)].append(qi)
        # the next sweep only sees removals made before it started
        dead = set()
        for pi in order:
            if pi not in alive:
                continue
            P = pats[pi]
            for T in P.corona:
                moved = [relative(T, x) for x in data[pi][0]]
                c_img = relative(T, P.center)
                # tiles over the new centre's halo must reappear in Q's corona
                th = system.halo_of(Placement(T.name))
                need = frozenset(x for x in moved if not th.isdisjoint(system.cells(x)))
                ok = False
                for qi in index.get((T.name, c_img), ()):
                    qt, qo = data[qi]
                    if need <= qt and _compatible(system, moved, qt, qo):
                        ok = True
                        break
                if not ok:
                    dead.add(pi)
                    break
        if dead:
            alive -= dead
            changed = True
    out = [pats[i] for i in sorted(alive)]
    stats = dict(plist.stats)
    stats["sweeps"] = sweeps
    return KPatchList(plist.k, system, out, True, stats)


# ---------------------------------------------------------------------------
# extension to k-patches


def extend_k(plist: KPatchList, one: KPatchList | None = None) -> KPatchList:
    """k-patches from reduced (k-1)-patches and reduced 1-patches.

    Each 1-patch around a centre is grown by choosing, for every corona tile
    T, a (k-1)-patch centred on T that is compatible with everything chosen
    so far; the new outer ring is everything at ring distance k.
    """
    system = plist.system
    one = one or plist
    if one.k != 1:
        raise ValueError("need the reduced 1-patch list")
    prev = plist
    by_c = defaultdict(list)
    for q in prev.patches:
        by_c[q.center.name].append(q)
    out = []
    for P in one.patches:
        corona = sorted(P.corona)
        base_tiles = {P.center, *corona}
        base_occ = set(_occupancy(system, base_tiles))

        def rec(i, tiles, occ):
            if i == len(corona):
                out.append(_ring_patch(system, P.center, tiles, prev.k + 1))
                return
            T = corona[i]
            for Q in by_c[T.name]:
                img = [act(T.pose, x) for x in Q.tiles()]
                if not all(x in tiles or occ.isdisjoint(system.cells(x)) for x in img):
                    continue
                # tiles of ours that overlap Q's region must be in Q
                q_tiles = set(img)
                q_occ = _occupancy(system, img)
                if not _compatible(system, tiles, frozenset(q_tiles), q_occ):
                    continue
                new = set(tiles) | q_tiles
                rec(i + 1, new, occ | q_occ)

        rec(0, base_tiles, base_occ)
    seen = {}
    for p in out:
        seen.setdefault(p.key(), p)
    res = KPatchList(prev.k + 1, system, sorted(seen.values(), key=KPatch.key), False)
    return reduce_k(res)


def _ring_patch(system: TileSystem, center: Placement, tiles: set, k: int) -> KPatch:
    """Split tiles into rings by touching distance from the centre; keep k rings."""
    cells = {t: system.cells(t) for t in tiles}
    rings = []
    inner = {center}
    frontier = {center}
    rest = set(tiles) - inner
    for _ in range(k):
        hal = set()
        for t in frontier:
            hal |= halo(cells[t])
        ring = {t for t in rest if not hal.isdisjoint(cells[t])}
        rings.append(frozenset(ring))
        rest -= ring
        frontier = ring
    return KPatch(center, tuple(rings))


def reduce_k(plist: KPatchList) -> KPatchList:
    """Reduction for k > 1: a corona tile must carry some surviving patch's
    inner (k-1) rings compatibly; ring-k tiles are not re-centred."""
    if plist.k == 1:
        return reduce(plist)
    system = plist.system
    pats = list(plist.patches)
    alive = set(range(len(pats)))
    changed = True
    sweeps = 0
    while changed:
        changed = False
        sweeps += 1
        index: dict = defaultdict(list)
        for qi in alive:
            index[pats[qi].center.name].append(qi)
        dead = set()
        for pi in sorted(alive):
            P = pats[pi]
            mine = P.tiles()
            for T in P.corona:
                moved = [relative(T, x) for x in mine]
                ok = False
                for qi in index[T.name]:
                    Q = pats[qi]
                    inner = [Q.center, *[x for r in Q.rings[:-1] for x in r]]
                    qt = frozenset(Q.tiles())
                    qo = _occupancy(system, inner)
                    if all(x in qt or qo.isdisjoint(system.cells(x)) for x in moved):
                        ok = True
                        break
                if not ok:
                    dead.add(pi)
                    break
        if dead:
            alive -= dead
            changed = True
    return KPatchList(plist.k, system, [pats[i] for i in sorted(alive)], True,
                      {"sweeps": sweeps})


def truncate(p: KPatch, k: int) -> KPatch:
    return KPatch(p.center, p.rings[:k])


# ---------------------------------------------------------------------------
# base-level pair filter for composite systems


class BasePairFilter:
    """Accept two composite placements when all touching member pairs are legal."""

    def __init__(self, base_system: TileSystem, legal: dict[str, frozenset]):
        self.base = base_system
        self.legal = legal
        self.touch: dict = {}
        for name in base_system.names():
            c = Placement(name)
            ccells = base_system.cells(c)
            rels = set()
            for cid in halo(ccells):
                for p, cells in base_system.candidates(cid):
                    if set(ccells).isdisjoint(cells):
                        rels.add(p)
            self.touch[name] = frozenset(rels)
        self._members: dict = {}
        self._cache: dict = {}

    def bind(self, system: TileSystem) -> "BasePairFilter":
        self._members = {n: t.base_members for n, t in system.tiles.items()}
        self._cache.clear()
        return self

    def __call__(self, a: Placement, b: Placement) -> bool:
        rel = relative(a, b)
        key = (a.name, rel)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._check(a.name, rel)
            self._cache[key] = hit
        return hit

    def _check(self, aname: str, rel: Placement) -> bool:
        for ma in self._members[aname]:
            for mb0 in self._members[rel.name]:
                mb = act(rel.pose, mb0)
                r = relative(ma, mb)
                if r in self.touch[ma.name] and r not in self.legal[ma.name]:
                    return False
        return True


# ---------------------------------------------------------------------------
# the hat/turtle analysis


@dataclass
class ChiralAnalysis:
    base: TileSystem
    raw: KPatchList
    reduced: KPatchList
    legal: dict
    t6h: Polykite | None = None
    t7h: Polykite | None = None
    t8h: Polykite | None = None
    forced_hat: Placement | None = None
    t8h_partner: Placement | None = None
    t6h_lists: tuple | None = None
    t7h_lists: tuple | None = None
    cluster_lists: tuple | None = None
    notes: dict = field(default_factory=dict)


def chiral_base_system() -> TileSystem:
    return TileSystem([hat(), turtle()], chiral=True)


def analyze_hat_turtle(order_seed: int | None = None) -> ChiralAnalysis:
    base = chiral_base_system()
    raw = enumerate_1patches(base)
    red = reduce(raw, order_seed)
    legal = legal_pairs(base, red)
    return ChiralAnalysis(base, raw, red, legal)


def single_species_patches(plist: KPatchList, center: str, other: str) -> list[KPatch]:
    """Patches centred on ``center`` whose corona is entirely ``other``."""
    return [p for p in plist.patches
            if p.center.name == center and set(p.shape_counts()) == {other}]


def t6h_from(analysis: ChiralAnalysis) -> Polykite:
    only = single_species_patches(analysis.reduced, "turtle", "hat")
    if len(only) != 1:
        raise ValueError(f"expected one all-hat turtle patch, found {len(only)}")
    p = only[0]
    parts = [(turtle(), IDENTITY_POSE)] + [(hat(), q.pose) for q in sorted(p.corona)]
    return composite("T6H", parts)


def _stage(analysis: ChiralAnalysis, tiles: Sequence[Polykite]) -> tuple[KPatchList, KPatchList]:
    filt = BasePairFilter(analysis.base, analysis.legal)
    system = TileSystem(tiles, chiral=True, pair_filter=filt)
    filt.bind(system)
    raw = enumerate_1patches(system)
    return raw, reduce(raw)


def common_neighbours(patches: Sequence[KPatch], name: str) -> set[Placement]:
    """Placements of shape ``name`` present in every patch's corona."""
    sets = [{q for q in p.corona if q.name == name} for p in patches]
    return set.intersection(*sets) if sets else set()


def force_t7h(analysis: ChiralAnalysis) -> ChiralAnalysis:
    """Enumerate over {hat, T6H}; every T6H-centred patch shares one hat."""
    t6h = analysis.t6h or t6h_from(analysis)
    analysis.t6h = t6h
    raw, red = _stage(analysis, [hat(), t6h])
    analysis.t6h_lists = (raw, red)
    centred = [p for p in red.patches if p.center.name == "T6H"]
    forced = common_neighbours(centred, "hat")
    analysis.notes["t6h_forced_hats"] = len(forced)
    if len(forced) != 1:
        raise ValueError(f"expected one forced hat around T6H, found {len(forced)}")
    fh = forced.pop()
    analysis.forced_hat = fh
    analysis.t7h = composite("T7H", [(t6h, IDENTITY_POSE), (hat(), fh.pose)])
    return analysis


def force_t8h(analysis: ChiralAnalysis) -> ChiralAnalysis:
    """Enumerate over {hat, T7H}; every hat-centred patch has a T7H at one spot."""
    if analysis.t7h is None:
        force_t7h(analysis)
    raw, red = _stage(analysis, [hat(), analysis.t7h])
    analysis.t7h_lists = (raw, red)
    centred = [p for p in red.patches if p.center.name == "hat"]
    partner = common_neighbours(centred, "T7H")
    analysis.notes["hat_t7h_partners"] = len(partner)
    if len(partner) != 1:
        raise ValueError(f"expected one T7H partner for free hats, found {len(partner)}")
    pt = partner.pop()
    analysis.t8h_partner = pt
    hat_in_t7h = relative(pt, Placement("hat"))
    analysis.t8h = composite("T8H", [(analysis.t7h, IDENTITY_POSE), (hat(), hat_in_t7h.pose)])
    # a T7H never takes two free hats in the T8H position
    t7c = [p for p in red.patches if p.center.name == "T7H"]
    analysis.notes["t7h_double_partner"] = sum(
        1 for p in t7c if sum(1 for q in p.corona if q == hat_in_t7h) > 1)
    return analysis


def cluster_lists(analysis: ChiralAnalysis) -> tuple[KPatchList, KPatchList]:
    if analysis.t8h is None:
        force_t8h(analysis)
    raw, red = _stage(analysis, [analysis.t7h, analysis.t8h])
    analysis.cluster_lists = (raw, red)
    return raw, red


def workers() -> int:
    """Worker count from SPECTRE_TILES_WORKERS (default 1)."""
    try:
        return max(1, int(os.environ.get("SPECTRE_TILES_WORKERS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=None)
def full_analysis() -> ChiralAnalysis:
    """The whole forcing chain, computed once per process."""
    a = analyze_hat_turtle()
    force_t7h(a)
    force_t8h(a)
    cluster_lists(a)
    return a


# ---------------------------------------------------------------------------
# the nine marked clusters


def hex_translation(v) -> tuple[int, int] | None:
    """(ti, tj) with hex_center(ti, tj) == v, or None off the hexagon lattice."""
    a, b, c, d = v
    if b or d or (c - a) % 6:
        return None
    tj = (c - a) // 6
    if a % 2:
        return None
    ti = a // 2 + tj
    return (ti, tj) if kg.hex_center(ti, tj) == v else None


def _path_dirs(path) -> tuple[int, ...]:
    from .geometry import direction_index
    return tuple(direction_index(b - a)[0] for a, b in zip(path, path[1:]))


def segment_shape(path) -> tuple[int, ...]:
    """Direction word of a boundary path, canonical under 60-degree turns."""
    ds = _path_dirs(path)
    return min(tuple((d + 2 * r) % 12 for d in ds) for r in range(6))


def segment_mate(shape: tuple[int, ...]) -> tuple[int, ...]:
    """Shape of the same path walked backwards (as seen by the neighbour)."""
    return min(tuple((d + 6 + 2 * r) % 12 for d in reversed(shape)) for r in range(6))


@dataclass(frozen=True)
class ClusterType:
    """A centre shape with a fixed set of degree-3 boundary vertices."""

    polykite: Polykite
    degree3: tuple[int, ...]          # indices into the boundary cycle, counter-clockwise
    cycle: tuple                      # boundary cycle at the identity pose
    shapes: tuple[tuple[int, ...], ...]

    def segment(self, i: int) -> tuple:
        n = len(self.cycle)
        a, b = self.degree3[i % 6], self.degree3[(i + 1) % 6]
        out = [self.cycle[a]]
        while a != b:
            a = (a + 1) % n
            out.append(self.cycle[a])
        return tuple(out)


@dataclass(frozen=True)
class MarkedCluster:
    kind: str
    polykite: Polykite
    labels: tuple                     # EdgeLabel per hexagon slot 0..5
    vertices: tuple                   # degree-3 vertex starting the edge of each slot
    segments: tuple                   # boundary path of each slot's edge
    members: tuple[Placement, ...]

    @property
    def tile_count(self) -> int:
        return len(self.members)


def cluster_types(red: KPatchList) -> dict[tuple[str, tuple[int, ...]], ClusterType]:
    """Group reduced cluster 1-patches by centre shape and degree-3 vertices."""
    system = red.system
    out: dict = {}
    for P in red.patches:
        cyc = kg.boundary_cycle(system.cells(P.center))
        touch: dict = defaultdict(set)
        for q in P.corona:
            for c in system.cells(q):
                for k in kg.kite_vertex_keys(c):
                    touch[k].add(q)
        deg3 = tuple(i for i, v in enumerate(cyc) if len(touch[v.key()]) == 2)
        if len(deg3) != 6:
            raise ValueError(f"{P.center.name} patch has {len(deg3)} degree-3 vertices")
        for a, b in zip(deg3, deg3[1:] + deg3[:1]):
            shared = touch[cyc[a].key()] & touch[cyc[b].key()]
            if len(shared) != 1:
                raise ValueError("a boundary segment borders more than one neighbour")
        key = (P.center.name, deg3)
        if key not in out:
            pk = system.tiles[P.center.name]
            ct = ClusterType(pk, deg3, tuple(cyc), ())
            shapes = tuple(segment_shape(ct.segment(i)) for i in range(6))
            out[key] = ClusterType(pk, deg3, tuple(cyc), shapes)
    return out


class BridgeError(ValueError):
    def __init__(self, msg: str, kinds: tuple = ()):
        super().__init__(msg)
        self.kinds = kinds


def bridge(types: dict, table: dict) -> tuple[dict, dict]:
    """Match cluster types to table kinds and segment shapes to edge labels.

    Returns (kind_of: type key -> (kind, offset), label_of: shape -> label)
    such that segment i of a type carries table label (i + offset) % 6 and
    reversed shapes get mated labels.  Raises BridgeError if no consistent
    match exists, naming the kinds whose rows are to blame: those whose
    row, once ignored, lets the rest match.
    """
    keys = sorted(types, key=lambda k: (len(types[k].polykite.members), k))
    kinds = sorted(table)
    if len(keys) != len(kinds):
        raise ValueError(f"{len(keys)} cluster types for {len(kinds)} hexagon kinds")

    def assign(shape, lab, label_of):
        for s, l in ((shape, lab), (segment_mate(shape), lab.mate())):
            if label_of.get(s, l) != l:
                return False
        used = {v: k for k, v in label_of.items()}
        for s, l in ((shape, lab), (segment_mate(shape), lab.mate())):
            if used.get(l, s) != s:
                return False
        label_of[shape] = lab
        label_of[segment_mate(shape)] = lab.mate()
        return True

    def rec(i, kind_of, label_of, free, skip):
        if i == len(keys):
            return dict(kind_of), dict(label_of)
        ct = types[keys[i]]
        for kind in sorted(free):
            if (kind == "Γ") != (len(ct.polykite.members) == 8):
                continue
            for off in range(1 if kind == skip else 6):
                trial = dict(label_of)
                if kind == skip or all(assign(ct.shapes[j], table[kind][(j + off) % 6], trial)
                                       for j in range(6)):
                    kind_of[keys[i]] = (kind, off)
                    got = rec(i + 1, kind_of, trial, free - {kind}, skip)
                    if got:
                        return got
                    del kind_of[keys[i]]
        return None

    got = rec(0, {}, {}, frozenset(kinds), None)
    if got is None:
        bad = tuple(k for k in kinds if rec(0, {}, {}, frozenset(kinds), k) is not None)
        named = ", ".join(bad) if bad else "several kinds"
        raise BridgeError(f"cluster types do not match the hexagon table (suspect row: {named})", bad)
    return got


@lru_cache(maxsize=None)
def classify_nine() -> dict[str, MarkedCluster]:
    """The nine marked clusters from the reduced {T7H, T8H} 1-patches."""
    from .hexsub import HEXAGON_TABLE
    a = full_analysis()
    red = a.cluster_lists[1]
    types = cluster_types(red)
    if len(types) != 9:
        raise ValueError(f"classification produced {len(types)} kinds")
    kind_of, _ = bridge(types, HEXAGON_TABLE)
    out = {}
    for key, (kind, off) in kind_of.items():
        ct = types[key]
        segs = tuple(ct.segment((s - off) % 6) for s in range(6))
        out[kind] = MarkedCluster(kind, ct.polykite, HEXAGON_TABLE[kind],
                                  tuple(seg[0] for seg in segs), segs, ct.polykite.base_members)
    return dict(sorted(out.items(), key=lambda kv: "ΓΔΘΛΞΠΣΦΨ".index(kv[0])))


def shape_labels() -> dict:
    from .hexsub import HEXAGON_TABLE
    return bridge(cluster_types(full_analysis().cluster_lists[1]), HEXAGON_TABLE)[1]


def glue(a: MarkedCluster, pose_a: GridPose, slot_a: int,
         b: MarkedCluster, slot_b: int) -> GridPose:
    """Pose of cluster b whose edge ``slot_b`` runs back along a's edge ``slot_a``."""
    ga = kg.pose_isometry(pose_a)
    target = [ga.apply(v) for v in reversed(a.segments[slot_a])]
    seg = b.segments[slot_b]
    if len(seg) != len(target):
        raise ValueError(f"edge lengths differ: {a.kind}[{slot_a}] / {b.kind}[{slot_b}]")
    for rot in range(6):
        gb = kg.pose_isometry(GridPose(rot, 0, 0))
        moved = [gb.apply(v) for v in seg]
        t = hex_translation(target[0] - moved[0])
        if t is None:
            continue
        if all(m + (target[0] - moved[0]) == w for m, w in zip(moved, target)):
            return GridPose(rot, t[0], t[1])
    raise ValueError(f"edges {a.kind}[{slot_a}] and {b.kind}[{slot_b}] are not congruent")


# ---------------------------------------------------------------------------
# decomposing hat/turtle patches into T7H and T8H


@dataclass
class Decomposition:
    clusters: list[tuple[str, Placement, tuple[Placement, ...]]]  # (T7H|T8H, pose, members)
    owner: dict                                                  # tile -> cluster index
    unassigned: set
    conflicts: list


def compose_t6h_t7h_t8h(tiles: Iterable[Placement], analysis: ChiralAnalysis | None = None) -> Decomposition:
    """Group unreflected hats and turtles into T7H/T8H clusters.

    Every turtle takes the six hats of its T6H and the forced seventh hat;
    every hat left over must sit in the T8H position of exactly one T7H.
    Missing members near the boundary leave tiles unassigned; a hat claimed
    twice is a conflict.
    """
    a = analysis or full_analysis()
    tiles = set(tiles)
    if any(t.reflect for t in tiles):
        raise ValueError("decomposition expects unreflected tiles")
    t7 = a.t7h.base_members
    extra = [m for m in a.t8h.base_members if m not in t7]
    owner: dict = {}
    conflicts = []
    clusters = []
    for t in sorted(tiles):
        if t.name != "turtle":
            continue
        mem = tuple(act(t.pose, m) for m in t7)
        if not all(m in tiles for m in mem):
            continue
        idx = len(clusters)
        clusters.append(["T7H", t, mem])
        for m in mem:
            if m in owner:
                conflicts.append(m)
            owner[m] = idx
    claims: dict = defaultdict(list)
    for idx, (_, pose, _m) in enumerate(clusters):
        for e in extra:
            h = act(pose.pose, e)
            if h in tiles and h not in owner:
                claims[h].append(idx)
    for h, idxs in claims.items():
        if len(idxs) > 1:
            conflicts.append(h)
            continue
        idx = idxs[0]
        clusters[idx][0] = "T8H"
        clusters[idx][2] = clusters[idx][2] + (h,)
        owner[h] = idx
    out = [(k, p, m) for k, p, m in clusters]
    return Decomposition(out, owner, tiles - set(owner), conflicts)
