from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spectre_tiles import assembly as A
from spectre_tiles.acceptance import odd_to_sqrt3
from spectre_tiles.geometry import QSqrt3, is_simple, polygon_area
from spectre_tiles.tiles import (EDGE_WORD, HAT, ODD, SCHEME_ALT, SCHEME_S, SQRT3_EXACT, TILE11,
                                 TURTLE, CurveSpec, apply_edge_curve, asymmetric_curve,
                                 build_tile_ab, check_reflection_blocking, default_s_curve,
                                 derive_edge_word, interior_angles, resize_edges, straight_curve,
                                 tile_area)

lengths = st.builds(QSqrt3, st.integers(0, 4), st.integers(0, 3)).filter(lambda x: x != 0)


def test_edge_word_matches_hat_outline():
    assert derive_edge_word() == EDGE_WORD


def test_tile11_shape():
    assert len(TILE11) == 14
    assert all(e.norm2() == 1 for e in TILE11.edges())
    ang = interior_angles(TILE11)
    assert sum(ang) == 180 * (14 - 2)
    assert ang.count(180) == 1


def test_hat_turtle_areas():
    # 8 and 10 kites; each kite is two 1-sqrt3-2 right triangles, area sqrt3
    kite = QSqrt3(0, 1)
    assert polygon_area(HAT) == kite * 8
    assert polygon_area(TURTLE) == kite * 10
    assert tile_area("hat") == polygon_area(HAT)


@given(lengths, lengths)
@settings(max_examples=60, deadline=None)
def test_tile_ab_closes_and_is_simple(a, b):
    P = build_tile_ab(a, b)
    assert len(P) == 14
    assert is_simple(P)
    assert polygon_area(P) > 0


def test_degenerate_tiles():
    assert len(build_tile_ab(0, 1)) < 14
    with pytest.raises(ValueError):
        build_tile_ab(0, 0)
    with pytest.raises(ValueError):
        build_tile_ab(Fraction(1, 2), 1)


@pytest.mark.parametrize("level", [1, 2, 3])
def test_resize_is_the_linear_odd_map(level):
    patch = A.iterate(level).patch()
    moved = resize_edges(patch, ODD, SQRT3_EXACT)
    assert {t.shape for t in moved.tiles} <= {"hat", "turtle"}
    base0, base1 = patch.tiles[0].pose.trans, moved.tiles[0].pose.trans
    for t0, t1 in zip(patch.tiles, moved.tiles):
        assert t1.pose.trans - base1 == odd_to_sqrt3(t0.pose.trans - base0)
        assert (t1.pose.rot, t1.pose.reflect) == (t0.pose.rot, t0.pose.reflect)


def test_resize_round_trip():
    patch = A.iterate(2).patch()
    there = resize_edges(patch, ODD, SQRT3_EXACT)
    back = resize_edges(there, ODD, 1)
    assert [t.pose for t in back.tiles] == [t.pose for t in patch.tiles]


def test_blocking_default_curves():
    assert check_reflection_blocking(default_s_curve(), SCHEME_S).blocked
    assert check_reflection_blocking(asymmetric_curve(), SCHEME_ALT).blocked
    rep = check_reflection_blocking(straight_curve(), SCHEME_S)
    assert not rep.blocked and rep.pairs_checked == 196


@given(st.integers(2, 6), st.fractions(Fraction(1, 40), Fraction(1, 6), max_denominator=60))
@settings(max_examples=15, deadline=None)
def test_s_curves_block_reflection(n, amp):
    curve = default_s_curve(n, amp)
    assert check_reflection_blocking(curve, SCHEME_S).blocked


def test_curve_validation():
    with pytest.raises(ValueError):
        CurveSpec(((0, 0), (1, 1)))
    with pytest.raises(ValueError):
        CurveSpec(((0, 0), (Fraction(1, 2), Fraction(1, 5)), (1, 0)), "s-curve")
    with pytest.raises(ValueError):
        apply_edge_curve(straight_curve())
    with pytest.raises(ValueError):
        apply_edge_curve(asymmetric_curve(), SCHEME_S)


def test_curved_boundary_counts():
    c = default_s_curve()
    b = apply_edge_curve(c, SCHEME_S)
    assert len(b.edge_starts) == 14
    assert len(b.points) == 14 * (len(c.samples) - 1)
