"""Kite grid, corona enumeration and the nine marked clusters."""
import pytest
from hypothesis import given, strategies as st

from spectre_tiles import kite_enum as ke
from spectre_tiles import kitegrid as kg
from spectre_tiles.geometry import Coord4, polygon_area
from spectre_tiles.hexsub import HEXAGON_TABLE
from spectre_tiles.tiles import HAT_CELLS, TURTLE_CELLS

poses = st.builds(kg.GridPose, st.integers(0, 5), st.integers(-6, 6), st.integers(-6, 6), st.booleans())


@given(poses)
def test_placed_cells_follow_the_isometry(pose):
    # oracle: move the kite polygons with the plane isometry and compare outlines
    g = kg.pose_isometry(pose)
    want = sorted(sorted(g.apply(v).key() for v in kg.kite_polygon(kg.pack(*c)).vertices) for c in HAT_CELLS)
    got = sorted(sorted(v.key() for v in kg.kite_polygon(cid).vertices)
                 for cid in kg.placed_cells(HAT_CELLS, pose))
    assert got == want


@given(poses, poses, poses)
def test_pose_group_laws(a, b, c):
    comp = kg.pose_compose
    assert comp(a, comp(b, c)) == comp(comp(a, b), c)
    assert comp(a, kg.pose_inverse(a)) == kg.GridPose(0, 0, 0, False)


def test_cell_counts_and_areas():
    assert len(HAT_CELLS) == 8 and len(TURTLE_CELLS) == 10
    assert len({polygon_area(kg.kite_polygon(kg.pack(*c))) for c in HAT_CELLS}) == 1


def test_boundary_of_a_single_kite():
    cyc = kg.boundary_cycle([kg.pack(0, 0, 0)])
    assert len(cyc) == 4


@pytest.fixture(scope="module")
def analysis():
    return ke.analyze_hat_turtle()


def test_raw_and_reduced_counts(analysis):
    # frozen from the first enumeration run
    assert analysis.raw.sizes() == {"hat": 251, "turtle": 251}
    assert analysis.reduced.sizes() == {"hat": 23, "turtle": 23}


def test_reduction_is_order_independent(analysis):
    again = ke.reduce(analysis.raw, order_seed=7)
    assert again.content_hash() == analysis.reduced.content_hash()


def test_one_patch_statements(analysis):
    red = analysis.reduced
    assert len(ke.single_species_patches(red, "turtle", "hat")) == 1
    assert len(ke.single_species_patches(red, "hat", "turtle")) == 1
    assert all(not q.reflect for p in red.patches for q in p.tiles())


def test_reduced_patches_are_overlap_free(analysis):
    system = analysis.base
    for p in analysis.reduced.patches:
        seen = set()
        for t in p.tiles():
            cells = system.cells(t)
            assert seen.isdisjoint(cells)
            seen |= cells


def test_forcing_chain_notes():
    a = ke.full_analysis()
    assert a.notes["t6h_forced_hats"] == 1
    assert a.notes["hat_t7h_partners"] == 1
    assert a.notes["t7h_double_partner"] == 0
    assert a.t7h.size == 6 * 8 + 10 + 8 and a.t8h.size == a.t7h.size + 8


def test_nine_clusters():
    nine = ke.classify_nine()
    assert list(nine) == list("ΓΔΘΛΞΠΣΦΨ")
    assert nine["Γ"].tile_count == 8
    assert all(c.tile_count == 9 for k, c in nine.items() if k != "Γ")
    assert sorted(map(str, nine["Γ"].labels)) == sorted(["α-", "α+", "β-", "β+", "γ-", "δ-"])
    for kind, c in nine.items():
        assert c.labels == HEXAGON_TABLE[kind]


def test_equal_labels_have_congruent_edges():
    nine = ke.classify_nine()
    shape_of = {}
    for c in nine.values():
        for lab, seg in zip(c.labels, c.segments):
            s = ke.segment_shape(seg)
            assert shape_of.setdefault(lab, s) == s
    for lab, s in shape_of.items():
        if lab.mate() in shape_of:
            assert shape_of[lab.mate()] == ke.segment_mate(s)


@given(st.lists(st.integers(0, 11), min_size=1, max_size=12), st.integers(0, 5))
def test_segment_mate_is_the_reversed_path(dirs, turn):
    from spectre_tiles.geometry import ORIGIN, unit
    path = [ORIGIN]
    for d in dirs:
        path.append(path[-1] + unit(d))
    shape = ke.segment_shape(path)
    assert ke.segment_shape([v.rotate(2 * turn) for v in path]) == shape
    assert ke.segment_mate(shape) == ke.segment_shape(path[::-1])
    assert ke.segment_mate(ke.segment_mate(shape)) == shape


def test_hex_translation_inverts_hex_center():
    for i in range(-5, 6):
        for j in range(-5, 6):
            assert ke.hex_translation(kg.hex_center(i, j)) == (i, j)
    assert ke.hex_translation(kg.hex_center(1, 0) + Coord4(1, 0, 0, 0)) is None


@pytest.mark.parametrize("kind", ["Σ", "Φ", "Γ"])
def test_corrupted_table_names_the_kind(kind):
    table = dict(HEXAGON_TABLE)
    row = list(table[kind])
    i = next(i for i in range(6) if row[i] != row[(i + 1) % 6])
    row[i], row[(i + 1) % 6] = row[(i + 1) % 6], row[i]
    table[kind] = tuple(row)
    types = ke.cluster_types(ke.full_analysis().cluster_lists[1])
    with pytest.raises(ke.BridgeError) as err:
        ke.bridge(types, table)
    assert kind in err.value.kinds


def test_glue_is_consistent():
    nine = ke.classify_nine()
    a = nine["Δ"]
    pose = kg.GridPose(0, 0, 0)
    for slot, lab in enumerate(a.labels):
        for kind, b in nine.items():
            for s2, lab2 in enumerate(b.labels):
                if lab2 == lab.mate() and lab.sign:
                    pb = ke.glue(a, pose, slot, b, s2)
                    gb = kg.pose_isometry(pb)
                    assert [gb.apply(v) for v in b.segments[s2]] == list(reversed(a.segments[slot]))
