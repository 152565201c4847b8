"""Marked hexagons, supertile substitution and composition.

Hexagons live on the axial lattice.  Slot ``s`` of a hexagon faces the
neighbour at ``pos + DIRS[s]``; slots run counter-clockwise.  A hexagon of
kind ``K`` with rotation ``m`` shows label ``HEXAGON_TABLE[K][(s - m) % 6]``
on world slot ``s``.  Vertices are stored tripled so that they stay integral:
corner ``k`` (shared by slots ``k`` and ``k+1``) of the hexagon at ``p`` is
``3p + DIRS[k] + DIRS[k+1]``.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

KINDS = ("Γ", "Δ", "Θ", "Λ", "Ξ", "Π", "Σ", "Φ", "Ψ")
LETTERS = ("α", "β", "γ", "δ", "ε", "ζ", "η", "θ")
ASCII_KINDS = dict(zip(("Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Phi", "Psi"), KINDS))
ASCII_LETTERS = dict(zip(("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"), LETTERS))

DIRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


class HexsubError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class EdgeLabel:
    letter: str
    sign: str = ""   # "+", "-" or "" (only for eta)

    def __post_init__(self):
        if self.letter not in LETTERS:
            raise ValueError(f"unknown letter {self.letter!r}")
        if self.sign not in ("+", "-", ""):
            raise ValueError(f"bad sign {self.sign!r}")
        if (self.sign == "") != (self.letter == "η"):
            raise ValueError("only η is unsigned")

    @classmethod
    def parse(cls, text: str) -> "EdgeLabel":
        text = text.strip().replace("−", "-")
        sign = text[-1] if text[-1] in "+-" else ""
        body = text[:-1] if sign else text
        letter = ASCII_LETTERS.get(body, body)
        return cls(letter, sign)

    def mate(self) -> "EdgeLabel":
        return EdgeLabel(self.letter, {"+": "-", "-": "+", "": ""}[self.sign])

    def __str__(self):
        return self.letter + self.sign


def matches(a: EdgeLabel, b: EdgeLabel) -> bool:
    """Same letter with opposite signs, or both unsigned."""
    if a.letter != b.letter:
        return False
    if a.sign == "" or b.sign == "":
        return a.sign == b.sign
    return a.sign != b.sign


def _labels(*names: str) -> tuple[EdgeLabel, ...]:
    return tuple(EdgeLabel.parse(n) for n in names)


# Labels in slot order 0..5 for the nine marked hexagons.
HEXAGON_TABLE: dict[str, tuple[EdgeLabel, ...]] = {
    "Γ": _labels("δ-", "β+", "β-", "α-", "α+", "γ-"),
    "Δ": _labels("α+", "γ-", "ζ-", "γ+", "β+", "ε-"),
    "Θ": _labels("β+", "η", "β-", "γ+", "β+", "θ+"),
    "Λ": _labels("α+", "θ-", "β-", "γ+", "β+", "ε-"),
    "Ξ": _labels("β+", "η", "β-", "α-", "ε+", "θ+"),
    "Π": _labels("α+", "θ-", "β-", "α-", "ε+", "ε-"),
    "Σ": _labels("α+", "γ-", "δ+", "ζ+", "β+", "ε-"),
    "Φ": _labels("ε+", "η", "β-", "γ+", "β+", "ε-"),
    "Ψ": _labels("ε+", "η", "β-", "α-", "ε+", "ε-"),
}


def hexagon_table() -> dict[str, tuple[EdgeLabel, ...]]:
    return dict(HEXAGON_TABLE)


# Supertile layouts as drawn: children (kind, rot, q, r), the six corner
# points in drawing coordinates (counter-clockwise) and the superedge labels
# read counter-clockwise from the first corner.
_X = {  # kind: (X3, X4, X5, X7, X8)
    "Γ": ("Φ", "Ξ", "Π", "Θ", None),
    "Δ": ("Φ", "Π", "Ξ", "Φ", "Ξ"),
    "Θ": ("Φ", "Π", "Ψ", "Φ", "Π"),
    "Λ": ("Φ", "Π", "Ψ", "Φ", "Ξ"),
    "Ξ": ("Φ", "Ψ", "Ψ", "Φ", "Π"),
    "Π": ("Φ", "Ψ", "Ψ", "Φ", "Ξ"),
    "Σ": ("Λ", "Π", "Ξ", "Φ", "Ξ"),
    "Φ": ("Φ", "Π", "Ψ", "Φ", "Ψ"),
    "Ψ": ("Φ", "Ψ", "Ψ", "Φ", "Ψ"),
}
# (rot, q, r) of the eight layout positions relative to the Γ child
LAYOUT_POSITIONS = ((0, 0, 0), (1, 1, 0), (2, 0, 1), (1, 1, 1), (4, 0, -1), (5, 1, -1), (0, 2, -1), (5, 2, -2))
EIGHTH = 7

_CORNERS = {
    "Γ": ((4, 4), (0, 2), (-2, 0), (0, -4), (10, -8), (10, 0)),
    "Δ": ((8, 2), (0, 2), (-2, -2), (6, -10), (10, -8), (10, -2)),
    "Θ": ((8, 2), (0, 2), (-2, 0), (4, -8), (8, -10), (10, -2)),
    "Λ": ((8, 2), (0, 2), (-2, 0), (6, -10), (10, -8), (10, -2)),
    "Ξ": ((4, 4), (0, 2), (-2, 0), (4, -8), (8, -10), (10, -2)),
    "Π": ((4, 4), (0, 2), (-2, 0), (6, -10), (10, -8), (10, -2)),
    "Σ": ((8, 2), (2, 4), (-2, -2), (6, -10), (10, -8), (10, -2)),
    "Φ": ((8, 2), (0, 2), (-2, 0), (4, -8), (10, -8), (10, -2)),
    "Ψ": ((4, 4), (0, 2), (-2, 0), (4, -8), (10, -8), (10, -2)),
}
_SUPEREDGE_LABELS = {
    "Γ": ("α-", "β-", "β+", "δ-", "γ-", "α+"),
    "Δ": ("γ+", "ζ-", "γ-", "α+", "ε-", "β+"),
    "Θ": ("γ+", "β-", "η", "β+", "θ+", "β+"),
    "Λ": ("γ+", "β-", "θ-", "α+", "ε-", "β+"),
    "Ξ": ("α-", "β-", "η", "β+", "θ+", "ε+"),
    "Π": ("α-", "β-", "θ-", "α+", "ε-", "ε+"),
    "Σ": ("ζ+", "δ+", "γ-", "α+", "ε-", "β+"),
    "Φ": ("γ+", "β-", "η", "ε+", "ε-", "β+"),
    "Ψ": ("α-", "β-", "η", "ε+", "ε-", "ε+"),
}


def _drawing_to_vertex(x: int, y: int) -> tuple[int, int]:
    # drawing frame: hexagon (q, r) is centred at (2 + 4q + 2r, 2r - 2q)
    x -= 2
    if (x - y) % 2 or (x + 2 * y) % 2:
        raise HexsubError(f"({x + 2}, {y}) is not a lattice corner")
    return ((x - y) // 2, (x + 2 * y) // 2)


def rot_axial(v: tuple[int, int], m: int) -> tuple[int, int]:
    q, r = v
    for _ in range(m % 6):
        q, r = -r, q + r
    return (q, r)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def corner(pos: tuple[int, int], k: int) -> tuple[int, int]:
    a, b = DIRS[k % 6], DIRS[(k + 1) % 6]
    return (3 * pos[0] + a[0] + b[0], 3 * pos[1] + a[1] + b[1])


def hex_distance(a, b) -> int:
    dq, dr = a[0] - b[0], a[1] - b[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


class Child(NamedTuple):
    kind: str
    rot: int
    pos: tuple[int, int]


@dataclass(frozen=True)
class Superedge:
    label: EdgeLabel
    path: tuple[tuple[int, int], ...]     # (child index, slot) in traversal order
    vertices: tuple[tuple[int, int], ...]  # tripled corners, len(path) + 1

    def child_labels(self, children: tuple[Child, ...]) -> tuple[EdgeLabel, ...]:
        return tuple(HEXAGON_TABLE[children[c].kind][(s - children[c].rot) % 6] for c, s in self.path)


@dataclass(frozen=True)
class SupertileLayout:
    kind: str
    children: tuple[Child, ...]
    vertices: tuple[tuple[int, int], ...]
    superedges: tuple[Superedge, ...]

    def superedge_for_slot(self, slot: int) -> int:
        """Superedge standing in for table slot ``slot`` of the parent hexagon."""
        return (3 - slot) % 6


def _boundary(children: Iterable[Child]):
    """Counter-clockwise boundary edges of a union of hexagons: start -> (end, child, slot)."""
    children = list(children)
    occupied = {c.pos for c in children}
    out = {}
    for idx, c in enumerate(children):
        for s in range(6):
            if _add(c.pos, DIRS[s]) in occupied:
                continue
            a, b = corner(c.pos, s - 1), corner(c.pos, s)
            if a in out:
                raise HexsubError("boundary is not a simple cycle")
            out[a] = (b, idx, s)
    return out


def _derive_layout(kind: str) -> SupertileLayout:
    children = tuple(Child(k, rot, (q, r)) for k, (rot, q, r) in zip(
        ("Γ", "Σ") + _X[kind][:3] + ("Δ",) + _X[kind][3:], LAYOUT_POSITIONS) if k is not None)
    verts = tuple(_drawing_to_vertex(*p) for p in _CORNERS[kind])
    bnd = _boundary(children)
    if len(bnd) != sum(6 for _ in children) - 2 * _internal_edges(children):
        raise HexsubError(f"supertile {kind} boundary has holes")
    edges = []
    for i in range(6):
        start, stop = verts[i], verts[(i + 1) % 6]
        path, vs, v = [], [start], start
        while True:
            if v not in bnd:
                raise HexsubError(f"corner {v} of supertile {kind} is off the boundary")
            nxt, c, s = bnd[v]
            path.append((c, s))
            vs.append(nxt)
            v = nxt
            if v == stop or v == start:
                break
        if v != stop:
            raise HexsubError(f"corners of supertile {kind} are not in boundary order")
        edges.append(Superedge(EdgeLabel.parse(_SUPEREDGE_LABELS[kind][i]), tuple(path), tuple(vs)))
    if sum(len(e.path) for e in edges) != len(bnd):
        raise HexsubError(f"superedges of {kind} do not cover the boundary")
    return SupertileLayout(kind, children, verts, tuple(edges))


def _internal_edges(children) -> int:
    occ = {c.pos for c in children}
    return sum(1 for c in children for s in range(3) if _add(c.pos, DIRS[s]) in occ)


@lru_cache(maxsize=None)
def supertile_table() -> dict[str, SupertileLayout]:
    return {k: _derive_layout(k) for k in KINDS}


def superedge_paths() -> dict[EdgeLabel, tuple[EdgeLabel, ...]]:
    """Child label sequence carried by each superedge label (checked consistent)."""
    out: dict[EdgeLabel, tuple[EdgeLabel, ...]] = {}
    for lay in supertile_table().values():
        for e in lay.superedges:
            seq = e.child_labels(lay.children)
            if out.setdefault(e.label, seq) != seq:
                raise HexsubError(f"superedge {e.label} has inconsistent child labels")
    return out


def validate_tables() -> list[str]:
    """Mechanical cross-checks of the frozen tables; returns a list of problems."""
    problems = []
    for kind, lay in supertile_table().items():
        hexl = HEXAGON_TABLE[kind]
        for i, e in enumerate(lay.superedges):
            if e.label != hexl[(3 - i) % 6]:
                problems.append(f"{kind}: superedge {i} is {e.label}, parent slot says {hexl[(3 - i) % 6]}")
        if sum(c.kind == "Γ" for c in lay.children) != 1:
            problems.append(f"{kind}: not exactly one Γ child")
        occ = {c.pos: c for c in lay.children}
        for c in lay.children:
            for s in range(6):
                n = occ.get(_add(c.pos, DIRS[s]))
                if n is None:
                    continue
                a = HEXAGON_TABLE[c.kind][(s - c.rot) % 6]
                b = HEXAGON_TABLE[n.kind][(s + 3 - n.rot) % 6]
                if not matches(a, b):
                    problems.append(f"{kind}: internal mismatch {a}/{b}")
    paths = superedge_paths()
    for lab, seq in paths.items():
        mate = lab.mate()
        want = tuple(x.mate() for x in reversed(seq))
        if mate in paths and paths[mate] != want:
            problems.append(f"superedge {lab} is not the reversed mate of {mate}")
    shapes = {}
    for lay in supertile_table().values():
        for e in lay.superedges:
            sh = _path_shape(e.vertices)
            if shapes.setdefault(e.label, sh) != sh:
                problems.append(f"superedge {e.label} has two shapes")
    return problems


def _path_shape(vs) -> tuple[int, ...]:
    """Directions of a corner path relative to its first step."""
    steps = [(b[0] - a[0], b[1] - a[1]) for a, b in zip(vs, vs[1:])]
    base = _step_dir(steps[0])
    return tuple((_step_dir(s) - base) % 6 for s in steps)


_STEP = {}
for _k in range(6):
    _a, _b = corner((0, 0), _k - 1), corner((0, 0), _k)
    _STEP[(_b[0] - _a[0], _b[1] - _a[1])] = _k
del _k, _a, _b


def _step_dir(v) -> int:
    return _STEP[v]


# ---------------------------------------------------------------------------
# combinatorial patches

Node = tuple[str, int]  # (kind, rot)


@dataclass
class CombPatch:
    nodes: dict[tuple[int, int], Node]
    mirrored: bool = False
    level: int = 0

    def __len__(self):
        return len(self.nodes)

    def label(self, pos, slot) -> EdgeLabel:
        kind, rot = self.nodes[pos]
        return HEXAGON_TABLE[kind][(slot - rot) % 6]

    def half_edges(self):
        """Interior edge pairs as ((pos, slot), (pos', slot+3))."""
        for pos in sorted(self.nodes):
            for s in range(3):
                n = _add(pos, DIRS[s])
                if n in self.nodes:
                    yield (pos, s), (n, s + 3)

    def violations(self) -> list[tuple]:
        return [(a, b) for a, b in self.half_edges()
                if not matches(self.label(*a), self.label(*b))]

    def is_valid(self) -> bool:
        return not self.violations() and self.is_connected()

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        start = next(iter(self.nodes))
        seen, todo = {start}, [start]
        while todo:
            p = todo.pop()
            for d in DIRS:
                n = _add(p, d)
                if n in self.nodes and n not in seen:
                    seen.add(n)
                    todo.append(n)
        return len(seen) == len(self.nodes)

    def holes(self) -> int:
        """Number of bounded empty regions enclosed by the patch."""
        if not self.nodes:
            return 0
        qs = [p[0] for p in self.nodes]
        rs = [p[1] for p in self.nodes]
        lo_q, hi_q, lo_r, hi_r = min(qs) - 1, max(qs) + 1, min(rs) - 1, max(rs) + 1
        empty = {(q, r) for q in range(lo_q, hi_q + 1) for r in range(lo_r, hi_r + 1)} - set(self.nodes)
        outside = {p for p in empty if p[0] in (lo_q, hi_q) or p[1] in (lo_r, hi_r)}
        todo = list(outside)
        while todo:
            p = todo.pop()
            for d in DIRS:
                n = _add(p, d)
                if n in empty and n not in outside:
                    outside.add(n)
                    todo.append(n)
        rest, count = empty - outside, 0
        while rest:
            count += 1
            todo = [rest.pop()]
            while todo:
                p = todo.pop()
                for d in DIRS:
                    n = _add(p, d)
                    if n in rest:
                        rest.discard(n)
                        todo.append(n)
        return count

    def counts(self) -> Counter:
        return Counter(k for k, _ in self.nodes.values())

    def interior(self, depth: int = 1) -> set:
        """Positions whose whole radius-``depth`` neighbourhood is present."""
        return {p for p in self.nodes if all(q in self.nodes for q in ball(p, depth))}

    def transformed(self, rot: int, trans=(0, 0)) -> "CombPatch":
        return CombPatch({_add(rot_axial(p, rot), trans): (k, (m + rot) % 6) for p, (k, m) in self.nodes.items()},
                         self.mirrored, self.level)

    def canonical(self) -> tuple:
        """Canonical form up to lattice rotation and translation."""
        best = None
        for r in range(6):
            t = self.transformed(r)
            lo = min(t.nodes)
            key = tuple(sorted(((p[0] - lo[0], p[1] - lo[1]), n) for p, n in t.nodes.items()))
            if best is None or key < best:
                best = key
        return best

    def restrict(self, keep: Iterable) -> "CombPatch":
        keep = set(keep)
        return CombPatch({p: n for p, n in self.nodes.items() if p in keep}, self.mirrored, self.level)


def ball(center, radius):
    cq, cr = center
    for dq in range(-radius, radius + 1):
        for dr in range(max(-radius, -dq - radius), min(radius, -dq + radius) + 1):
            yield (cq + dq, cr + dr)


def single(kind: str, rot: int = 0) -> CombPatch:
    if kind not in HEXAGON_TABLE:
        kind = ASCII_KINDS.get(kind, kind)
    if kind not in HEXAGON_TABLE:
        raise HexsubError(f"unknown hexagon kind {kind!r}")
    return CombPatch({(0, 0): (kind, rot % 6)})


# ---------------------------------------------------------------------------
# substitution


class _Placed(NamedTuple):
    rot: int
    trans: tuple[int, int]

    def vertex(self, v):
        x = rot_axial(v, self.rot)
        return (x[0] + 3 * self.trans[0], x[1] + 3 * self.trans[1])


def _glue(lay_a: SupertileLayout, pa: _Placed, ea: int, lay_b: SupertileLayout, eb: int) -> _Placed:
    """Placement of supertile B so that its superedge ``eb`` runs back along A's ``ea``."""
    va = [pa.vertex(v) for v in lay_a.superedges[ea].vertices]
    vb = lay_b.superedges[eb].vertices
    if len(va) != len(vb):
        raise HexsubError(f"superedge length mismatch {lay_a.kind}/{lay_b.kind}: {len(va) - 1} vs {len(vb) - 1}")
    target = va[::-1]
    for rho in range(6):
        rb = [rot_axial(v, rho) for v in vb]
        dq, dr = target[0][0] - rb[0][0], target[0][1] - rb[0][1]
        if dq % 3 or dr % 3:
            continue
        if all((x[0] + dq, x[1] + dr) == y for x, y in zip(rb, target)):
            return _Placed(rho, (dq // 3, dr // 3))
    raise HexsubError(f"superedges of {lay_a.kind} and {lay_b.kind} are not congruent")


def substitute(patch: CombPatch) -> CombPatch:
    """Replace every hexagon by its supertile and stitch neighbours along superedges."""
    if not patch.nodes:
        return CombPatch({}, not patch.mirrored, patch.level + 1)
    bad = patch.violations()
    if bad:
        raise HexsubError(f"input patch violates matching at {bad[0]}")
    table = supertile_table()
    order = sorted(patch.nodes)
    root = order[0]
    placed = {root: _Placed((-patch.nodes[root][1]) % 6, (0, 0))}
    todo = deque([root])
    while todo:
        p = todo.popleft()
        kind, m = patch.nodes[p]
        for s in range(6):
            n = _add(p, DIRS[s])
            if n not in patch.nodes:
                continue
            nkind, nm = patch.nodes[n]
            ea = (3 - (s - m)) % 6
            eb = (3 - (s + 3 - nm)) % 6
            pb = _glue(table[kind], placed[p], ea, table[nkind], eb)
            if n in placed:
                if placed[n] != pb:
                    raise HexsubError(f"inconsistent stitching around {n}")
            else:
                placed[n] = pb
                todo.append(n)
    out: dict[tuple[int, int], Node] = {}
    for p in order:
        pl = placed[p]
        for c in table[patch.nodes[p][0]].children:
            pos = _add(rot_axial(c.pos, pl.rot), pl.trans)
            if pos in out:
                raise HexsubError(f"supertiles overlap at {pos}")
            out[pos] = (c.kind, (c.rot + pl.rot) % 6)
    res = CombPatch(out, not patch.mirrored, patch.level + 1)
    bad = res.violations()
    if bad:
        raise HexsubError(f"matching violated after stitching at {bad[0]}")
    expect = sum(7 if k == "Γ" else 8 for k, _ in patch.nodes.values())
    if len(res) != expect:
        raise HexsubError("node count recurrence failed")
    return res


def iterate(kind: str, n: int, rot: int = 0) -> CombPatch:
    p = single(kind, rot)
    for _ in range(n):
        p = substitute(p)
    return p


# ---------------------------------------------------------------------------
# composition


@dataclass
class Composition:
    patch: CombPatch                       # supertile-level patch
    members: dict[tuple[int, int], tuple[int, int]]  # child pos -> supertile pos
    unassigned: set
    incomplete: list                      # Γ positions whose supertile could not be identified


def _expected(g, grot, idx):
    rot, q, r = LAYOUT_POSITIONS[idx]
    return _add(g, rot_axial((q, r), grot)), (rot + grot) % 6


def supertile_contents(patch: CombPatch, g) -> tuple:
    """Kinds found at the eight layout positions of the Γ at ``g`` (None if absent or misoriented)."""
    grot = patch.nodes[g][1]
    out = []
    for idx in range(8):
        pos, rot = _expected(g, grot, idx)
        n = patch.nodes.get(pos)
        out.append(n[0] if n is not None and n[1] == rot else None)
    return tuple(out)


def _layout_contents(kind):
    return tuple(c.kind for c in supertile_table()[kind].children[:7]) + (
        supertile_table()[kind].children[7].kind if len(supertile_table()[kind].children) == 8 else None,)


def identify_supertile(contents: tuple, has_eighth: bool | None) -> str | None:
    """Supertile kind from the layout contents around a Γ.

    ``has_eighth`` is None when the eighth position lies outside the window;
    the kind is then returned only if the seven fixed hexagons decide it.
    """
    found = []
    for kind in KINDS:
        lc = _layout_contents(kind)
        if lc[:7] != contents[:7]:
            continue
        if has_eighth is None:
            found.append(kind)
        elif (lc[EIGHTH] is not None) == has_eighth and (not has_eighth or lc[EIGHTH] == contents[EIGHTH]):
            found.append(kind)
    return found[0] if len(found) == 1 else None


def assign(patch: CombPatch):
    """Accretion rule: fixed six around each Γ, then the eighth position.

    Returns (members, conflicts) where members maps hexagon -> Γ position.
    """
    gammas = sorted(p for p, (k, _) in patch.nodes.items() if k == "Γ")
    members: dict = {}
    conflicts = []
    for g in gammas:
        members[g] = g
        grot = patch.nodes[g][1]
        for idx in range(1, 7):
            pos, rot = _expected(g, grot, idx)
            n = patch.nodes.get(pos)
            if n is None:
                continue
            if n[1] != rot or n[0] == "Γ":
                conflicts.append((g, pos))
                continue
            if pos in members:
                conflicts.append((g, pos))
            members[pos] = g
    eighth: dict = {}
    for g in gammas:
        pos, rot = _expected(g, patch.nodes[g][1], EIGHTH)
        n = patch.nodes.get(pos)
        if n is None or pos in members or n[1] != rot:
            continue
        if pos in eighth:
            conflicts.append((g, pos))
        eighth[pos] = g
    members.update(eighth)
    return members, conflicts


def compose(patch: CombPatch, strict: bool = True) -> Composition:
    """Group hexagons into supertiles and return the supertile-level patch.

    Only supertiles whose eight layout positions are decided inside the
    window are kept; boundary hexagons may stay unassigned.
    """
    members, conflicts = assign(patch)
    if conflicts and strict:
        raise HexsubError(f"ambiguous supertile assignment at {conflicts[0][1]}")
    table = supertile_table()
    kinds = {}
    incomplete = []
    for g in sorted(p for p, (k, _) in patch.nodes.items() if k == "Γ"):
        cont = supertile_contents(patch, g)
        if None in cont[:7]:
            incomplete.append(g)
            continue
        e_pos, _ = _expected(g, patch.nodes[g][1], EIGHTH)
        kind = identify_supertile(cont, (members.get(e_pos) == g) if e_pos in patch.nodes else None)
        if kind is None:
            # the eighth hexagon may be claimed by a neighbour outside the window
            incomplete.append(g)
            if strict and interior_enough(patch, g):
                raise HexsubError(f"no supertile matches the contents around Γ at {g}")
            continue
        kinds[g] = kind
    # embed supertiles on a lattice of their own via superedge adjacency
    by_child = {c: g for c, g in members.items() if g in kinds}
    place: dict = {}
    out: dict = {}
    for g0 in kinds:
        if g0 in place:
            continue
        place[g0] = (0, 0) if not place else _far(out)
        out[place[g0]] = (kinds[g0], (-patch.nodes[g0][1]) % 6)
        todo = deque([g0])
        while todo:
            g = todo.popleft()
            lay = table[kinds[g]]
            grot = patch.nodes[g][1]
            pm = (-grot) % 6
            for i, e in enumerate(lay.superedges):
                c, s = e.path[0]
                child = _add(g, rot_axial(lay.children[c].pos, grot))
                across = _add(child, DIRS[(s + grot) % 6])
                h = by_child.get(across)
                if h is None:
                    continue
                slot = (((3 - i) % 6) + pm) % 6
                target = _add(place[g], DIRS[slot])
                if h in place:
                    if place[h] != target:
                        raise HexsubError("supertiles do not form a hexagonal arrangement")
                    continue
                if target in out:
                    raise HexsubError("two supertiles claim one lattice position")
                place[h] = target
                out[target] = (kinds[h], (-patch.nodes[h][1]) % 6)
                todo.append(h)
    unassigned = set(patch.nodes) - set(by_child)
    res = CombPatch(out, not patch.mirrored, max(patch.level - 1, 0))
    return Composition(res, {c: place[g] for c, g in by_child.items() if g in place}, unassigned, incomplete)


def _far(out):
    return (max(p[0] for p in out) + 100, 0)


def interior_enough(patch: CombPatch, g, radius: int = 5) -> bool:
    return all(q in patch.nodes for q in ball(g, radius))


def same_up_to_translation(a: CombPatch, b: CombPatch) -> bool:
    if len(a) != len(b) or not a.nodes:
        return len(a) == len(b)
    la, lb = min(a.nodes), min(b.nodes)
    return all(b.nodes.get((p[0] - la[0] + lb[0], p[1] - la[1] + lb[1])) == n for p, n in a.nodes.items())


def hierarchy_depth(patch: CombPatch, limit: int = 10) -> list[CombPatch]:
    """Iterated composition until a single hexagon remains."""
    chain = [patch]
    while len(chain[-1]) > 1 and len(chain) <= limit:
        nxt = compose(chain[-1]).patch
        if len(nxt) >= len(chain[-1]) or not nxt.nodes:
            break
        chain.append(nxt)
    return chain


# ---------------------------------------------------------------------------
# periodicity


def check_nonperiodic(patch: CombPatch, max_shift: int, trim: int = 0) -> bool:
    """True iff no nonzero lattice translation up to ``max_shift`` is a symmetry.

    A translation ``v`` counts as a symmetry when every kept hexagon ``h``
    with ``h + v`` in the patch carries the same kind and rotation there, and
    at least one such ``h`` exists.  ``trim`` drops hexagons within that
    distance of the boundary first.
    """
    keep = patch.interior(trim) if trim else set(patch.nodes)
    for v in ball((0, 0), max_shift):
        if v == (0, 0):
            continue
        overlap = 0
        ok = True
        for h in keep:
            t = _add(h, v)
            if t not in patch.nodes:
                continue
            overlap += 1
            if patch.nodes[t] != patch.nodes[h]:
                ok = False
                break
        if ok and overlap:
            return False
    return True


# ---------------------------------------------------------------------------
# k-patches over marked hexagons


@dataclass
class HexPatchList:
    k: int
    patches: list[dict]        # each maps relative pos -> (kind, rot); centre at origin with rot 0
    reduced: bool = False
    stats: dict = field(default_factory=dict)

    def by_center(self) -> Counter:
        return Counter(p[(0, 0)][0] for p in self.patches)


def _fits(a: Mapping, b: Mapping) -> bool:
    small, big = (a, b) if len(a) < len(b) else (b, a)
    return all(big.get(p, n) == n for p, n in small.items())


def _moved(patch: Mapping, rot: int, trans) -> dict:
    return {_add(rot_axial(p, rot), trans): (k, (m + rot) % 6) for p, (k, m) in patch.items()}


def _key(patch: Mapping) -> tuple:
    return tuple(sorted(patch.items()))


def hex_1patches() -> HexPatchList:
    """All ways to surround each hexagon kind by six matching neighbours."""
    out = []
    for kind in KINDS:
        opts = []
        for s in range(6):
            lab = HEXAGON_TABLE[kind][s]
            opts.append([(k, m) for k in KINDS for m in range(6)
                         if matches(lab, HEXAGON_TABLE[k][(s + 3 - m) % 6])])
        def rec(s, acc):
            if s == 6:
                # ring consistency between neighbour s=5 and s=0
                if _ring_ok(acc[5], 5, acc[0]):
                    yield list(acc)
                return
            for o in opts[s]:
                if s and not _ring_ok(acc[s - 1], s - 1, o):
                    continue
                acc.append(o)
                yield from rec(s + 1, acc)
                acc.pop()
        for ring in rec(0, []):
            p = {(0, 0): (kind, 0)}
            for s, n in enumerate(ring):
                p[DIRS[s]] = n
            out.append(p)
    return HexPatchList(1, out)


def _ring_ok(a, sa, b) -> bool:
    """Neighbours at slots sa and sa+1 of a centre are adjacent to each other."""
    # from DIRS[sa] the neighbour DIRS[sa+1] lies in direction sa+2
    d = (sa + 2) % 6
    la = HEXAGON_TABLE[a[0]][(d - a[1]) % 6]
    lb = HEXAGON_TABLE[b[0]][(d + 3 - b[1]) % 6]
    return matches(la, lb)


class _Index:
    """(k)-patches indexed by centre node, in every rotation."""

    def __init__(self, plist: HexPatchList):
        self.by_node: dict = {}
        for p in plist.patches:
            kind = p[(0, 0)][0]
            for r in range(6):
                self.by_node.setdefault((kind, r), []).append(_moved(p, r, (0, 0)))

    def at(self, node, pos):
        for q in self.by_node.get(node, ()):
            yield _moved(q, 0, pos)


def extend_hex(plist: HexPatchList) -> HexPatchList:
    """k-patches whose six neighbours each carry a compatible (k-1)-patch."""
    idx = _Index(plist)
    out = {}
    for p in plist.patches:
        def rec(s, acc):
            if s == 6:
                yield acc
                return
            n = DIRS[s]
            for q in idx.at(p[n], n):
                if _fits(acc, q):
                    merged = dict(acc)
                    merged.update(q)
                    yield from rec(s + 1, merged)
        for m in rec(0, p):
            out.setdefault(_key(m), m)
    res = HexPatchList(plist.k + 1, list(out.values()))
    res.stats["raw"] = len(res.patches)
    return res


def reduce_hex(plist: HexPatchList) -> HexPatchList:
    """Drop patches in which some neighbour's overlap is not covered by a surviving patch."""
    alive = {_key(p): p for p in plist.patches}
    sweeps = 0
    while True:
        sweeps += 1
        idx = _Index(HexPatchList(plist.k, list(alive.values())))
        dead = []
        for key, p in alive.items():
            for n in DIRS:
                if not any(_fits(p, q) for q in idx.at(p[n], n)):
                    dead.append(key)
                    break
        for key in dead:
            del alive[key]
        if not dead:
            break
    out = HexPatchList(plist.k, sorted(alive.values(), key=_key), True, dict(plist.stats))
    out.stats["reduced"] = len(out.patches)
    out.stats["sweeps"] = sweeps
    return out


def hex_kpatches(k: int) -> list[HexPatchList]:
    lists = [reduce_hex(hex_1patches())]
    while lists[-1].k < k:
        lists.append(reduce_hex(extend_hex(lists[-1])))
    return lists


def supertile_analysis(plist: HexPatchList) -> dict:
    """Apply the accretion rule inside every reduced patch.

    Checks that each centre hexagon lands in exactly one supertile and
    collects the supertile contents seen around Γ centres.
    """
    contents = set()
    failures = []
    for p in plist.patches:
        patch = CombPatch(dict(p))
        members, conflicts = assign(patch)
        if conflicts:
            failures.append(("conflict", _key(p)))
            continue
        center = (0, 0)
        if center not in members:
            failures.append(("unassigned", _key(p)))
            continue
        if p[center][0] == "Γ":
            cont = supertile_contents(patch, center)
            e_pos, _ = _expected(center, 0, EIGHTH)
            has8 = members.get(e_pos) == center
            kind = identify_supertile(cont, has8)
            if kind is None:
                failures.append(("unknown-supertile", _key(p)))
            else:
                contents.add((kind, cont[:7] + ((cont[EIGHTH],) if has8 else ())))
    return {"contents": contents, "kinds": sorted({k for k, _ in contents}), "failures": failures,
            "patches": len(plist.patches)}


# ---------------------------------------------------------------------------
# geometry


@dataclass
class Realization:
    patch: object                         # tiles.Patch of hats and turtles
    poses: dict                           # hexagon pos -> cluster GridPose
    rot_offset: int                       # cluster rot - hexagon rot (same for every hexagon)
    placements: list = field(default_factory=list)  # (grid Placement, hexagon pos) per tile


def realize_geometry(patch: CombPatch, check: bool = True) -> Realization:
    """Replace each hexagon by its marked cluster of hats and turtles.

    Clusters are glued edge to edge along their boundary segments, starting
    from the first hexagon.  With ``check`` every pair of tiles is tested
    for interior overlap in exact arithmetic.
    """
    from . import kite_enum as ke
    from .geometry import overlapping_pairs
    from .tiles import Patch, polykite_to_placed
    from .kitegrid import GridPose

    clusters = ke.classify_nine()
    if not patch.nodes:
        return Realization(Patch([]), {}, 0)
    order = sorted(patch.nodes)
    root = order[0]
    poses = {root: GridPose(patch.nodes[root][1], 0, 0)}
    todo = deque([root])
    while todo:
        p = todo.popleft()
        kind, m = patch.nodes[p]
        for s in range(6):
            n = _add(p, DIRS[s])
            if n not in patch.nodes:
                continue
            nkind, nm = patch.nodes[n]
            pose = ke.glue(clusters[kind], poses[p], (s - m) % 6, clusters[nkind], (s + 3 - nm) % 6)
            if n in poses:
                if poses[n] != pose:
                    raise HexsubError(f"clusters do not close up around {n}")
            else:
                poses[n] = pose
                todo.append(n)
    offs = {(poses[p].rot - patch.nodes[p][1]) % 6 for p in poses}
    if len(offs) != 1:
        raise HexsubError("cluster rotations do not follow hexagon rotations")
    tiles, placements = [], []
    for p in order:
        kind = patch.nodes[p][0]
        for mem in clusters[kind].members:
            placed = ke.act(poses[p], mem)
            t = polykite_to_placed(placed.name, placed.pose)
            tiles.append(type(t)(t.shape, t.pose, f"{kind}@{p[0]},{p[1]}"))
            placements.append((placed, p))
    out = Patch(tiles)
    if check:
        bad = overlapping_pairs(out.polygons())
        if bad:
            raise HexsubError(f"realized clusters overlap: tiles {bad[0]}")
    return Realization(out, poses, offs.pop(), placements)


def tile_signature(t) -> frozenset:
    return frozenset(v.key() for v in t.polygon.vertices)


def congruent_patches(a, b, allow_reflection: bool = True):
    """Isometry taking tile patch ``a`` onto ``b`` tile for tile (or None)."""
    if len(a.tiles) != len(b.tiles) or not a.tiles:
        return None
    target = {tile_signature(t) for t in b.tiles}
    a0 = a.tiles[0]
    inv = a0.pose.inverse()
    for t in b.tiles:
        if t.shape != a0.shape:
            continue
        if t.pose.reflect != a0.pose.reflect and not allow_reflection:
            continue
        g = t.pose @ inv
        if all(tile_signature(type(x)(x.shape, g @ x.pose)) in target for x in a.tiles):
            return g
    return None


# ---------------------------------------------------------------------------
# random test patches


@lru_cache(maxsize=None)
def _source(kind: str, levels: int) -> tuple[CombPatch, tuple]:
    src = iterate(kind, levels)
    return src, tuple(sorted(src.interior(3)))


def random_patch(rng, size: int = 50, levels: int = 4) -> CombPatch:
    """A random connected, hole-free window of at least ``size`` hexagons.

    The window is grown from a random hexagon of a substitution patch, so it
    lies in the tiling universe.
    """
    src, inner = _source(rng.choice(KINDS[1:]), levels)
    nodes = src.nodes
    start = rng.choice(inner)
    keep = {start}
    frontier = [start]
    while len(keep) < size:
        p = rng.choice(frontier)
        opts = [n for n in (_add(p, d) for d in DIRS) if n in nodes and n not in keep]
        if not opts:
            frontier.remove(p)
            continue
        n = rng.choice(opts)
        keep.add(n)
        frontier.append(n)
    win = src.restrict(keep)
    # fill enclosed gaps so the window is simply connected
    if win.holes():
        win = _fill_holes(win, src)
    rot = rng.randrange(6)
    out = win.transformed(rot)
    out.mirrored = False
    out.level = 0
    return out


def _fill_holes(win: CombPatch, src: CombPatch) -> CombPatch:
    nodes = dict(win.nodes)
    qs = [p[0] for p in nodes]
    rs = [p[1] for p in nodes]
    box = {(q, r) for q in range(min(qs) - 1, max(qs) + 2) for r in range(min(rs) - 1, max(rs) + 2)}
    empty = box - set(nodes)
    edge = {p for p in empty if p[0] in (min(qs) - 1, max(qs) + 1) or p[1] in (min(rs) - 1, max(rs) + 1)}
    todo, outside = list(edge), set(edge)
    while todo:
        p = todo.pop()
        for d in DIRS:
            n = _add(p, d)
            if n in empty and n not in outside:
                outside.add(n)
                todo.append(n)
    for p in empty - outside:
        nodes[p] = src.nodes[p]
    return CombPatch(nodes, win.mirrored, win.level)


def inverse_trial(rng, size: int = 50) -> tuple[bool, bool]:
    """One substitute/compose round trip: (substitution valid, composition recovers P)."""
    P = random_patch(rng, size)
    S = substitute(P)
    valid = not S.violations()
    C = compose(S).patch
    return valid, same_up_to_translation(C, P)


# ---------------------------------------------------------------------------
# periodicity of realized tile patches


@dataclass
class PeriodicityReport:
    nonperiodic: bool
    shifts_tested: int
    max_shift: float
    witness: object = None      # (ti, tj) of a symmetry translation, if one was found


def check_nonperiodic_tiles(placements, max_shift: float | None = None) -> PeriodicityReport:
    """Exact translation scan over hats and turtles on the kite grid.

    A hexagon-lattice shift ``v`` is a symmetry when every tile whose shifted
    kites meet an occupied kite lands exactly on a tile of the patch.  Shifts
    are those taking a central tile to another tile of the same shape and
    orientation, up to ``max_shift`` (default: half the patch diameter).
    """
    import math
    from . import kitegrid as kg
    from .kite_enum import chiral_base_system

    system = chiral_base_system()
    tiles = sorted(set(placements))
    occ = {}
    for t in tiles:
        for c in system.cells(t):
            occ[c] = t
    tset = set(tiles)
    pos = [kg.hex_center(t.ti, t.tj).to_float() for t in tiles]
    cx = sum(p[0] for p in pos) / len(pos)
    cy = sum(p[1] for p in pos) / len(pos)
    if max_shift is None:
        max_shift = max(math.hypot(p[0] - cx, p[1] - cy) for p in pos)
    ref = min(range(len(tiles)), key=lambda i: math.hypot(pos[i][0] - cx, pos[i][1] - cy))
    r0 = tiles[ref]
    tested = 0
    for t in tiles:
        if t == r0 or (t.name, t.rot, t.reflect) != (r0.name, r0.rot, r0.reflect):
            continue
        di, dj = t.ti - r0.ti, t.tj - r0.tj
        if math.hypot(*kg.hex_center(di, dj).to_float()) > max_shift:
            continue
        tested += 1
        off = kg.shift(di, dj)
        ok = True
        for x in tiles:
            cells = system.cells(x)
            if not any(c + off in occ for c in cells):
                continue
            if x._replace(ti=x.ti + di, tj=x.tj + dj) not in tset:
                ok = False
                break
        if ok:
            return PeriodicityReport(False, tested, max_shift, (di, dj))
    return PeriodicityReport(True, tested, max_shift)
