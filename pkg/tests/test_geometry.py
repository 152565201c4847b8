import math

from hypothesis import given, strategies as st

from spectre_tiles import _kernels, _kernels_py
from spectre_tiles.geometry import (ORIGIN, Coord4, Isometry, Polygon, QSqrt3, congruence, cross,
                                    dot, from_key, is_simple, orient, overlapping_pairs,
                                    polygon_area, rotate30, segments_intersect, sign_surd, unit)
from spectre_tiles.tiles import TILE11

small = st.integers(-50, 50)
coords = st.builds(Coord4, small, small, small, small)
isos = st.builds(Isometry, st.integers(0, 11), st.booleans(), coords)


def close(a, b, tol=1e-9):
    return all(abs(x - y) < tol for x, y in zip(a, b))


@given(coords)
def test_key_roundtrip(v):
    assert from_key(v.key()) == v


@given(coords, coords)
def test_key_injective_against_floats(u, v):
    # equal keys exactly when the float embeddings coincide
    same = close(u.to_float(), v.to_float(), 1e-7)
    assert (u.key() == v.key()) == same


@given(coords, st.integers(-30, 30))
def test_rotation_matches_complex(v, k):
    z = complex(*v.to_float()) * complex(math.cos(k * math.pi / 6), math.sin(k * math.pi / 6))
    assert close(rotate30(v, k).to_float(), (z.real, z.imag), 1e-6)


def test_twelve_rotations_is_identity():
    v = Coord4(3, -1, 4, 1)
    assert rotate30(v, 12) == v
    assert rotate30(unit(0), 3) == unit(3)


@given(isos, isos, coords)
def test_compose_and_inverse(g, h, v):
    assert (g @ h).apply(v) == g.apply(h.apply(v))
    assert g.inverse().apply(g.apply(v)) == v


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_sign_surd_matches_float(p, q):
    x = p + q * math.sqrt(3)
    if abs(x) > 1e-3:
        assert sign_surd(p, q) == (1 if x > 0 else -1)
    if p == 0 and q == 0:
        assert sign_surd(p, q) == 0


@given(st.integers(-(10**30), 10**30), st.integers(-(10**30), 10**30))
def test_kernels_agree_beyond_64_bits(p, q):
    assert _kernels.sign_surd(p, q) == _kernels_py.sign_surd(p, q)


@given(coords, coords, coords)
def test_orient_kernels_agree(a, b, c):
    assert _kernels.orient_keys(a.key(), b.key(), c.key()) == _kernels_py.orient_keys(a.key(), b.key(), c.key())
    fx = (b.to_float()[0] - a.to_float()[0]) * (c.to_float()[1] - a.to_float()[1]) - \
         (b.to_float()[1] - a.to_float()[1]) * (c.to_float()[0] - a.to_float()[0])
    if abs(fx) > 1e-6:
        assert orient(a, b, c) == (1 if fx > 0 else -1)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_qsqrt3_arithmetic(a, b, c, d):
    x, y = QSqrt3(a, b), QSqrt3(c, d)
    fx, fy = a + b * math.sqrt(3), c + d * math.sqrt(3)
    assert abs(float(x * y) - fx * fy) < 1e-6
    assert abs(float(x + y) - (fx + fy)) < 1e-9
    if y != 0:
        assert abs(float(x / y) - fx / fy) < 1e-6 * max(1, abs(fx / fy))


@given(coords, coords)
def test_cross_dot_against_floats(u, v):
    (ux, uy), (vx, vy) = u.to_float(), v.to_float()
    assert abs(float(cross(u, v)) - (ux * vy - uy * vx)) < 1e-6
    assert abs(float(dot(u, v)) - (ux * vx + uy * vy)) < 1e-6


def _shoelace(pts):
    return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1])) / 2


def test_tile_area_exact_vs_float():
    assert abs(float(polygon_area(TILE11)) - _shoelace(TILE11.to_float())) < 1e-9
    assert polygon_area(TILE11) > 0


@given(isos)
def test_congruence_recovers_isometry(g):
    Q = TILE11.transformed(g)
    h = congruence(TILE11, Q, allow_reflection=True)
    assert h is not None
    assert sorted(h.apply(v).key() for v in TILE11.vertices) == sorted(v.key() for v in Q.vertices)


def test_overlap_detection():
    a = TILE11
    b = TILE11.transformed(Isometry(0, False, unit(0)))
    far = TILE11.transformed(Isometry(0, False, Coord4(40, 0, 0, 0)))
    assert overlapping_pairs([a, b]) == [(0, 1)]
    assert overlapping_pairs([a, far]) == []


def test_segments_and_simplicity():
    assert segments_intersect(ORIGIN, Coord4(2, 0, 0, 0), Coord4(1, 0, -1, 0), Coord4(1, 0, 1, 0))
    bow = Polygon([ORIGIN, Coord4(2, 0, 2, 0), Coord4(2, 0, 0, 0), Coord4(0, 0, 2, 0)])
    assert not is_simple(bow)
    assert is_simple(TILE11)


def test_backend_reported():
    assert _kernels.BACKEND in ("cython", "python")
