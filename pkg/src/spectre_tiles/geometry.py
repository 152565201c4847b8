"""Exact arithmetic for the 12-fold tiling world.

Points are integer 4-tuples over the unit vectors u(0), u(1), u(2), u(3)
at 0, 30, 60 and 90 degrees.  Every coordinate of such a point is of the
form (p + q*sqrt3)/2, so all predicates reduce to integer sign tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from . import _kernels

SQRT3 = math.sqrt(3.0)


class Coord4(NamedTuple):
    """The point c0*u(0) + c1*u(1) + c2*u(2) + c3*u(3)."""

    c0: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0

    def __add__(self, other):  # type: ignore[override]
        return Coord4(self[0] + other[0], self[1] + other[1],
                      self[2] + other[2], self[3] + other[3])

    def __sub__(self, other):
        return Coord4(self[0] - other[0], self[1] - other[1],
                      self[2] - other[2], self[3] - other[3])

    def __neg__(self):
        return Coord4(-self[0], -self[1], -self[2], -self[3])

    def __mul__(self, k):  # type: ignore[override]
        if isinstance(k, int):
            return Coord4(self[0] * k, self[1] * k, self[2] * k, self[3] * k)
        return NotImplemented

    __rmul__ = __mul__

    def key(self) -> tuple[int, int, int, int]:
        """Doubled embedding (2x = a + b*sqrt3, 2y = c + d*sqrt3) as (a, b, c, d).

        The map from integer 4-tuples to this key is injective, so equal keys
        mean equal points.
        """
        c0, c1, c2, c3 = self
        return (2 * c0 + c2, c1, c1 + 2 * c3, c2)

    def embed(self) -> tuple["QSqrt3", "QSqrt3"]:
        a, b, c, d = self.key()
        return QSqrt3(a, b, 2), QSqrt3(c, d, 2)

    def to_float(self) -> tuple[float, float]:
        a, b, c, d = self.key()
        return ((a + b * SQRT3) / 2.0, (c + d * SQRT3) / 2.0)

    def rotate(self, k: int = 1) -> "Coord4":
        return rotate30(self, k)

    def norm2(self) -> "QSqrt3":
        x, y = self.embed()
        return x * x + y * y


ORIGIN = Coord4(0, 0, 0, 0)


def unit(k: int) -> Coord4:
    """Unit vector u(k) at 30k degrees."""
    return rotate30(Coord4(1, 0, 0, 0), k)


def rotate30(v: Sequence[int], k: int = 1) -> Coord4:
    """Rotate by 30k degrees about the origin (integer basis map)."""
    c0, c1, c2, c3 = v
    for _ in range(k % 12):
        # u0->u1, u1->u2, u2->u3, u3->u2-u0
        c0, c1, c2, c3 = -c3, c0, c1 + c3, c2
    return Coord4(c0, c1, c2, c3)


def reflect_y(v: Sequence[int]) -> Coord4:
    """Mirror in the x axis: u(k) -> u(-k)."""
    c0, c1, c2, c3 = v
    return Coord4(c0 + c2, c1, -c2, -c1 - c3)


def from_key(key: Sequence[int]) -> Coord4:
    """Inverse of :meth:`Coord4.key`; raises if the key is not on the lattice."""
    a, b, c, d = key
    c1, c2 = b, d
    if (a - c2) % 2 or (c - c1) % 2:
        raise ValueError(f"key {tuple(key)} is not an integer Coord4")
    return Coord4((a - c2) // 2, c1, c2, (c - c1) // 2)


# ---------------------------------------------------------------------------
# Scalars in Q(sqrt3)


@dataclass(frozen=True)
class QSqrt3:
    """Exact value (p + q*sqrt3)/den with den > 0, kept in lowest terms."""

    p: int
    q: int = 0
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            if self.den == 0:
                raise ZeroDivisionError("zero denominator")
            object.__setattr__(self, "p", -self.p)
            object.__setattr__(self, "q", -self.q)
            object.__setattr__(self, "den", -self.den)
        g = math.gcd(math.gcd(self.p, self.q), self.den)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)
            object.__setattr__(self, "den", self.den // g)

    @staticmethod
    def coerce(x) -> "QSqrt3":
        if isinstance(x, QSqrt3):
            return x
        if isinstance(x, int):
            return QSqrt3(x)
        if isinstance(x, Fraction):
            return QSqrt3(x.numerator, 0, x.denominator)
        raise TypeError(f"cannot coerce {x!r} to QSqrt3")

    def __add__(self, other):
        o = QSqrt3.coerce(other)
        return QSqrt3(self.p * o.den + o.p * self.den,
                      self.q * o.den + o.q * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt3(-self.p, -self.q, self.den)

    def __sub__(self, other):
        return self + (-QSqrt3.coerce(other))

    def __rsub__(self, other):
        return QSqrt3.coerce(other) - self

    def __mul__(self, other):
        o = QSqrt3.coerce(other)
        return QSqrt3(self.p * o.p + 3 * self.q * o.q,
                      self.p * o.q + self.q * o.p, self.den * o.den)

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt3":
        return QSqrt3(self.p, -self.q, self.den)

    def __truediv__(self, other):
        o = QSqrt3.coerce(other)
        n = o.p * o.p - 3 * o.q * o.q
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt3)")
        num = self * o.conjugate()
        return QSqrt3(num.p * o.den, num.q * o.den, num.den * n)

    def sign(self) -> int:
        return sign_surd(self.p, self.q)

    def __eq__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.p, self.q, self.den) == (o.p, o.q, o.den)

    def __hash__(self):
        return hash((self.p, self.q, self.den))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return (self.p + self.q * SQRT3) / self.den

    def __repr__(self):
        if self.q == 0:
            body = f"{self.p}"
        else:
            body = f"{self.p}{self.q:+}√3"
        return body if self.den == 1 else f"({body})/{self.den}"


SQRT3_EXACT = QSqrt3(0, 1)


def sign_surd(p: int, q: int) -> int:
    """Sign of p + q*sqrt3 for integers p, q."""
    if p >= 0 and q >= 0:
        return 0 if p == 0 and q == 0 else 1
    if p <= 0 and q <= 0:
        return -1
    d = p * p - 3 * q * q
    if d == 0:
        return 0  # unreachable for p, q not both zero
    return (1 if d > 0 else -1) if p > 0 else (-1 if d > 0 else 1)


# ---------------------------------------------------------------------------
# Isometries


class Isometry(NamedTuple):
    """x -> rotate(reflect(x)) + trans, reflection (if any) first."""

    rot: int = 0
    reflect: bool = False
    trans: Coord4 = ORIGIN

    def apply(self, v: Sequence[int]) -> Coord4:
        if self.reflect:
            v = reflect_y(v)
        return rotate30(v, self.rot) + self.trans

    def apply_vector(self, v: Sequence[int]) -> Coord4:
        if self.reflect:
            v = reflect_y(v)
        return rotate30(v, self.rot)

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other."""
        rot = (self.rot + (-other.rot if self.reflect else other.rot)) % 12
        return Isometry(rot, self.reflect != other.reflect, self.apply(other.trans))

    __matmul__ = compose

    def inverse(self) -> "Isometry":
        if self.reflect:
            # x -> R(rot) F x + t ; F R(r) = R(-r) F
            inv = Isometry(self.rot % 12, True, ORIGIN)
        else:
            inv = Isometry((-self.rot) % 12, False, ORIGIN)
        return Isometry(inv.rot, inv.reflect, -inv.apply(self.trans))

    def normalized(self) -> "Isometry":
        return Isometry(self.rot % 12, bool(self.reflect), Coord4(*self.trans))


IDENTITY = Isometry()


def translation(t: Sequence[int]) -> Isometry:
    return Isometry(0, False, Coord4(*t))


def rotation(k: int, center: Sequence[int] = ORIGIN) -> Isometry:
    c = Coord4(*center)
    return Isometry(k % 12, False, c - rotate30(c, k))


def apply_isometry(g: Isometry, v: Sequence[int]) -> Coord4:
    return g.apply(v)


def compose(g: Isometry, h: Isometry) -> Isometry:
    return g.compose(h)


# ---------------------------------------------------------------------------
# Predicates


def cross(u: Sequence[int], v: Sequence[int]) -> QSqrt3:
    """Exact z-component of u x v."""
    ua, ub, uc, ud = Coord4(*u).key()
    va, vb, vc, vd = Coord4(*v).key()
    # (ua + ub r)(vc + vd r) - (uc + ud r)(va + vb r), all over 4
    p = ua * vc + 3 * ub * vd - uc * va - 3 * ud * vb
    q = ua * vd + ub * vc - uc * vb - ud * va
    return QSqrt3(p, q, 4)


def dot(u: Sequence[int], v: Sequence[int]) -> QSqrt3:
    ua, ub, uc, ud = Coord4(*u).key()
    va, vb, vc, vd = Coord4(*v).key()
    p = ua * va + 3 * ub * vb + uc * vc + 3 * ud * vd
    q = ua * vb + ub * va + uc * vd + ud * vc
    return QSqrt3(p, q, 4)


def _cross_sign(u, v) -> int:
    ua, ub, uc, ud = u
    va, vb, vc, vd = v
    return sign_surd(ua * vc + 3 * ub * vd - uc * va - 3 * ud * vb,
                     ua * vd + ub * vc - uc * vb - ud * va)


def _dot_sign(u, v) -> int:
    ua, ub, uc, ud = u
    va, vb, vc, vd = v
    return sign_surd(ua * va + 3 * ub * vb + uc * vc + 3 * ud * vd,
                     ua * vb + ub * va + uc * vd + ud * vc)


def _ksub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def orient(a: Coord4, b: Coord4, c: Coord4) -> int:
    """+1 if a, b, c turn left, -1 if right, 0 if collinear."""
    ka, kb, kc = a.key(), b.key(), c.key()
    return _cross_sign(_ksub(kb, ka), _ksub(kc, ka))


def _on_segment(ka, kb, kp) -> bool:
    """kp collinear with ka-kb assumed; is it within the closed segment?"""
    return _dot_sign(_ksub(ka, kp), _ksub(kb, kp)) <= 0


def segments_cross_properly(a, b, c, d) -> bool:
    """Open segments ab and cd intersect in exactly one interior point."""
    return _kernels.cross_properly(a.key(), b.key(), c.key(), d.key())


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments ab and cd share at least one point."""
    ka, kb, kc, kd = a.key(), b.key(), c.key(), d.key()
    d1 = _cross_sign(_ksub(kb, ka), _ksub(kc, ka))
    d2 = _cross_sign(_ksub(kb, ka), _ksub(kd, ka))
    d3 = _cross_sign(_ksub(kd, kc), _ksub(ka, kc))
    d4 = _cross_sign(_ksub(kd, kc), _ksub(kb, kc))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    if d1 == 0 and _on_segment(ka, kb, kc):
        return True
    if d2 == 0 and _on_segment(ka, kb, kd):
        return True
    if d3 == 0 and _on_segment(kc, kd, ka):
        return True
    if d4 == 0 and _on_segment(kc, kd, kb):
        return True
    return False


# ---------------------------------------------------------------------------
# Polygons


class Polygon:
    """Closed polygon given by its vertex cycle (exact Coord4 vertices)."""

    __slots__ = ("vertices", "_keys")

    def __init__(self, vertices: Iterable[Sequence[int]]):
        self.vertices: tuple[Coord4, ...] = tuple(Coord4(*v) for v in vertices)
        if len(self.vertices) < 3:
            raise ValueError("a polygon needs at least three vertices")
        self._keys = None

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self):
        return f"Polygon({list(map(tuple, self.vertices))})"

    @property
    def keys(self):
        if self._keys is None:
            self._keys = tuple(v.key() for v in self.vertices)
        return self._keys

    def edges(self) -> list[Coord4]:
        vs = self.vertices
        return [vs[(i + 1) % len(vs)] - vs[i] for i in range(len(vs))]

    def transformed(self, g: Isometry) -> "Polygon":
        vs = [g.apply(v) for v in self.vertices]
        if g.reflect:
            vs.reverse()  # keep counterclockwise
        return Polygon(vs)

    def image(self, g: Isometry) -> "Polygon":
        """Pointwise image, without reordering (orientation flips under reflection)."""
        return Polygon(g.apply(v) for v in self.vertices)

    def reversed(self) -> "Polygon":
        return Polygon(reversed(self.vertices))

    def canonical(self) -> tuple:
        """Lexicographically minimal rotation of the embedded vertex sequence."""
        ks = self.keys
        n = len(ks)
        return min(ks[i:] + ks[:i] for i in range(n))

    def __eq__(self, other):
        return isinstance(other, Polygon) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def to_float(self) -> list[tuple[float, float]]:
        return [v.to_float() for v in self.vertices]

    def contains_vertex(self, p: Coord4) -> bool:
        return p.key() in set(self.keys)


def polygon_area(P: Polygon | Sequence[Sequence[int]]) -> QSqrt3:
    """Exact signed shoelace area; positive for counterclockwise polygons."""
    if not isinstance(P, Polygon):
        P = Polygon(P)
    total = QSqrt3(0)
    vs = P.vertices
    closure = ORIGIN
    for e in P.edges():
        closure = closure + e
    if closure != ORIGIN:
        raise ValueError("polygon is not closed")
    acc_p = acc_q = 0
    ks = P.keys
    n = len(ks)
    for i in range(n):
        a, b = ks[i], ks[(i + 1) % n]
        acc_p += a[0] * b[2] + 3 * a[1] * b[3] - a[2] * b[0] - 3 * a[3] * b[1]
        acc_q += a[0] * b[3] + a[1] * b[2] - a[2] * b[1] - a[3] * b[0]
    total = QSqrt3(acc_p, acc_q, 8)
    del vs
    return total


def is_simple(P: Polygon) -> bool:
    """No two non-adjacent edges meet, adjacent edges only at their shared vertex."""
    vs = P.vertices
    n = len(vs)
    if len(set(P.keys)) != n:
        return False
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = vs[j], vs[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent: only overlap if they fold back onto each other
                shared = b if j == i + 1 else a
                other_a = a if j == i + 1 else b
                other_c = d if j == i + 1 else c
                if orient(other_a, shared, other_c) == 0:
                    ka, ks, kc = other_a.key(), shared.key(), other_c.key()
                    if _dot_sign(_ksub(ka, ks), _ksub(kc, ks)) > 0:
                        return False
                continue
            if segments_intersect(a, b, c, d):
                return False
    return True


def point_in_polygon(p: Coord4, P: Polygon) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside (exact)."""
    return _kernels.point_in_polygon_keys(Coord4(*p).key(), P.keys)


def _midpoint_doubled(a: Coord4, b: Coord4) -> Coord4:
    return a + b


def polygons_interior_disjoint(P: Polygon, Q: Polygon) -> bool:
    """True iff the open interiors of two simple polygons do not meet."""
    # bounding boxes in float are safe as a coarse reject with slack
    pf, qf = P.to_float(), Q.to_float()
    if (max(x for x, _ in pf) < min(x for x, _ in qf) - 1e-9
            or max(x for x, _ in qf) < min(x for x, _ in pf) - 1e-9
            or max(y for _, y in pf) < min(y for _, y in qf) - 1e-9
            or max(y for _, y in qf) < min(y for _, y in pf) - 1e-9):
        return True
    return _kernels.interior_disjoint_keys(P.keys, Q.keys)


def congruence(P: Polygon, Q: Polygon, allow_reflection: bool = False) -> Isometry | None:
    """Find g with g(P) == Q as vertex cycles, or None."""
    if len(P) != len(Q):
        return None
    qkeys = Q.keys
    n = len(P)
    target = set(qkeys)
    options = [False, True] if allow_reflection else [False]
    for refl in options:
        for rot in range(12):
            base = Isometry(rot, refl, ORIGIN)
            p0 = base.apply(P.vertices[0])
            for q0 in Q.vertices:
                g = Isometry(rot, refl, q0 - p0)
                img = [g.apply(v).key() for v in P.vertices]
                if set(img) != target:
                    continue
                # cyclic order check (reversed if reflecting)
                seq = img[::-1] if refl else img
                start = qkeys.index(seq[0])
                if all(qkeys[(start + i) % n] == seq[i] for i in range(n)):
                    return g
    return None


def direction_index(v: Coord4) -> tuple[int, QSqrt3] | None:
    """If v = s*u(k) with s > 0, return (k, s); else None."""
    for k in range(12):
        w = unit(k)
        if cross(w, v).sign() == 0 and dot(w, v).sign() > 0:
            return k, dot(w, v)
    return None


def _bbox(P: Polygon):
    pts = P.to_float()
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    return min(xs), min(ys), max(xs), max(ys)


def _bucket_pairs(boxes, cell: float):
    """Index pairs whose float bounding boxes (padded) share a grid bucket."""
    grid: dict = {}
    for idx, (x0, y0, x1, y1) in enumerate(boxes):
        for gx in range(int((x0 - 1e-6) // cell), int((x1 + 1e-6) // cell) + 1):
            for gy in range(int((y0 - 1e-6) // cell), int((y1 + 1e-6) // cell) + 1):
                grid.setdefault((gx, gy), []).append(idx)
    seen = set()
    for members in grid.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                pair = (members[a], members[b])
                if pair not in seen:
                    seen.add(pair)
                    yield pair


def overlapping_pairs(polys: Sequence[Polygon]) -> list[tuple[int, int]]:
    """All index pairs (i < j) whose interiors meet; float bucketing, exact tests."""
    boxes = [_bbox(P) for P in polys]
    cell = max((max(b[2] - b[0], b[3] - b[1]) for b in boxes), default=1.0) or 1.0
    bad = []
    for i, j in _bucket_pairs(boxes, cell):
        if not polygons_interior_disjoint(polys[i], polys[j]):
            bad.append((min(i, j), max(i, j)))
    return sorted(bad)


def vertex_to_vertex_violations(polys: Sequence[Polygon]) -> list[tuple[int, Coord4]]:
    """(tile index, vertex) pairs where a vertex sits inside another tile's edge."""
    boxes = [_bbox(P) for P in polys]
    cell = max((max(b[2] - b[0], b[3] - b[1]) for b in boxes), default=1.0) or 1.0
    out = []
    for i, j in _bucket_pairs(boxes, cell):
        for a_idx, b_idx in ((i, j), (j, i)):
            A, B = polys[a_idx], polys[b_idx]
            for idx in _kernels.vertices_inside_edges(A.keys, B.keys):
                out.append((b_idx, A.vertices[idx]))
    return out
