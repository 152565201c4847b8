import io

import pytest
from hypothesis import given, strategies as st

from spectre_tiles import assembly as A
from spectre_tiles import hexsub as H
from spectre_tiles.geometry import Coord4, Isometry
from spectre_tiles.patchio import (PatchFile, PatchFormatError, content_hash, dumps, loads,
                                   read_patch, roundtrip, write_patch)
from spectre_tiles.tiles import Patch, PlacedTile

small = st.integers(-10**6, 10**6)
tiles = st.builds(PlacedTile, st.sampled_from(["tile11", "spectre", "hat", "turtle"]),
                  st.builds(Isometry, st.integers(0, 11), st.booleans(),
                            st.builds(Coord4, small, small, small, small)),
                  st.sampled_from(["", "mystic-even", "a b/c%"]))


def thousand_tiles():
    return Patch(A.iterate(4).patch().tiles[:1000])


def test_thousand_tile_round_trip(tmp_path):
    p = thousand_tiles()
    path = tmp_path / "p.patch"
    digest = write_patch(path, PatchFile.from_patch(p, source="level4"))
    back = read_patch(path)
    assert back.tiles == p.tiles and back.meta == {"source": "level4"}
    assert content_hash(back) == digest
    assert dumps(back) == path.read_text()


@given(st.lists(tiles, max_size=30))
def test_random_round_trip(ts):
    pf = PatchFile(ts, [(0, {"kind": "Σ", "labels": "α+,β-"})] if ts else [])
    assert dumps(roundtrip(pf)) == dumps(pf)
    assert roundtrip(pf).tiles == ts


def test_hash_ignores_record_order():
    ts = thousand_tiles().tiles[:20]
    assert content_hash(PatchFile(ts)) == content_hash(PatchFile(ts[::-1]))
    assert dumps(PatchFile(ts)) != dumps(PatchFile(ts[::-1]))


def test_hexagon_records():
    comb = H.iterate("Π", 2)
    back = roundtrip(PatchFile.from_comb(comb)).comb()
    assert back.nodes == comb.nodes and back.mirrored == comb.mirrored and back.level == comb.level


def test_truncated_file_reports_offset():
    text = dumps(PatchFile(thousand_tiles().tiles[:5]))
    cut = text[:len(text) // 2]
    with pytest.raises(PatchFormatError) as err:
        loads(cut)
    assert err.value.offset == len(cut.encode())
    with pytest.raises(PatchFormatError, match="missing digest"):
        loads(text.rsplit("sha256", 1)[0])


def test_edited_translation_is_caught():
    text = dumps(PatchFile(thousand_tiles().tiles[:5]))
    lines = text.splitlines(keepends=True)
    i = next(i for i, l in enumerate(lines) if l.startswith("tile"))
    parts = lines[i].split()
    parts[4] = str(int(parts[4]) + 1)
    lines[i] = " ".join(parts) + "\n"
    with pytest.raises(PatchFormatError, match="hash mismatch"):
        loads("".join(lines))


def test_unknown_record_and_version():
    text = dumps(PatchFile())
    head, rest = text.split("\n", 1)
    with pytest.raises(PatchFormatError, match="unsupported version"):
        loads("spectre-tiles-patch 2\n" + rest)
    bad = text.replace("sha256", "widget 1\nsha256")
    with pytest.raises(PatchFormatError, match="unknown record") as err:
        loads(bad)
    assert err.value.offset == bad.index("widget")


def test_stream_io():
    buf = io.StringIO()
    write_patch(buf, Patch(thousand_tiles().tiles[:3]))
    assert read_patch(io.BytesIO(buf.getvalue().encode())).tiles == thousand_tiles().tiles[:3]
