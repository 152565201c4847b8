"""Marked hexagons: tables, substitution, composition, k-patches, geometry."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from spectre_tiles import assembly as A
from spectre_tiles import hexsub as H
from spectre_tiles.tiles import ODD, SQRT3_EXACT, resize_edges

kinds = st.sampled_from(H.KINDS)
rots = st.integers(0, 5)


def test_tables_are_consistent():
    assert H.validate_tables() == []
    assert sorted(H.HEXAGON_TABLE) == sorted(H.KINDS)
    assert all(len(row) == 6 for row in H.HEXAGON_TABLE.values())


def test_edge_labels():
    a = H.EdgeLabel.parse("alpha+")
    assert str(a) == "α+" and a.mate() == H.EdgeLabel("α", "-")
    assert H.matches(a, a.mate()) and not H.matches(a, a)
    eta = H.EdgeLabel.parse("η")
    assert H.matches(eta, eta)
    with pytest.raises(ValueError):
        H.EdgeLabel("η", "+")


@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), rots)
def test_axial_rotation(v, m):
    assert H.rot_axial(v, 6) == v
    assert H.hex_distance((0, 0), H.rot_axial(v, m)) == H.hex_distance((0, 0), v)


def test_supertile_sizes():
    table = H.supertile_table()
    assert len(table["Γ"].children) == 7
    assert all(len(table[k].children) == 8 for k in H.KINDS if k != "Γ")


@pytest.mark.parametrize("n,count", [(1, 8), (2, 63), (3, 496)])
def test_iterate_counts(n, count):
    # matches the [[7,6],[1,1]] count recurrence for a nine-tile seed
    P = H.iterate("Δ", n)
    assert len(P) == count
    assert P.is_valid()
    assert P.holes() == 0


@given(kinds, rots)
@settings(max_examples=30, deadline=None)
def test_substitution_is_valid_and_inverted(kind, rot):
    P = H.iterate(kind, 2, rot)
    assert P.is_valid()
    comp = H.compose(H.substitute(P))
    assert not comp.unassigned and not comp.incomplete
    assert H.same_up_to_translation(comp.patch, P)


def test_mirroring_alternates():
    P = H.single("Δ")
    Q = H.substitute(P)
    assert Q.mirrored != P.mirrored and Q.level == P.level + 1


@given(st.integers(0, 10**9))
@settings(max_examples=25, deadline=None)
def test_random_windows_round_trip(seed):
    rng = random.Random(seed)
    valid, inverse = H.inverse_trial(rng, rng.randrange(50, 120))
    assert valid and inverse


def test_random_patch_size():
    rng = random.Random(5)
    P = H.random_patch(rng, 60)
    assert len(P) >= 60 and P.is_valid() and P.is_connected()


def test_hierarchy_reaches_a_single_hexagon():
    chain = H.hierarchy_depth(H.iterate("Ψ", 3))
    assert [len(c) for c in chain] == [496, 63, 8, 1]


def test_wrong_label_is_a_violation():
    P = H.iterate("Δ", 1)
    pos = next(p for p, (k, _) in P.nodes.items() if k != "Γ")
    bad = dict(P.nodes)
    kind, rot = bad[pos]
    bad[pos] = (kind, (rot + 1) % 6)
    assert not H.CombPatch(bad).is_valid()


def test_combinatorial_nonperiodicity():
    assert H.check_nonperiodic(H.iterate("Δ", 3), max_shift=8, trim=2)
    # a periodic control: one hexagon kind repeated on the lattice has every shift
    flat = H.CombPatch({p: ("Γ", 0) for p in H.ball((0, 0), 4)})
    assert not H.check_nonperiodic(flat, max_shift=2)


def test_hex_kpatch_counts():
    lists = H.hex_kpatches(3)
    assert [len(x.patches) for x in lists] == [51, 106, 191]
    assert all(x.reduced for x in lists)


@pytest.mark.parametrize("level,reflect", [(2, False), (3, True)])
def test_realized_geometry_matches_assembly(level, reflect):
    real = H.realize_geometry(H.iterate("Δ", level - 1))
    resized = resize_edges(A.iterate(level).patch(), ODD, SQRT3_EXACT)
    g = H.congruent_patches(real.patch, resized)
    assert g is not None and g.reflect == reflect
    assert real.rot_offset == 0


def test_realized_tiling_is_nonperiodic_and_control_is_not():
    real = H.realize_geometry(H.iterate("Δ", 2), check=False)
    assert H.check_nonperiodic_tiles([p for p, _ in real.placements]).nonperiodic
    from spectre_tiles.kite_enum import Placement
    # a periodic packing of hats (spaced so that no two overlap) must be caught
    lattice = [Placement("hat", 0, 2 * i, 2 * j) for i in range(-4, 5) for j in range(-4, 5)]
    rep = H.check_nonperiodic_tiles(lattice)
    assert not rep.nonperiodic and rep.witness is not None
