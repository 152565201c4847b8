import re
import xml.etree.ElementTree as ET

from spectre_tiles import assembly as A
from spectre_tiles import hexsub as H
from spectre_tiles.geometry import Isometry
from spectre_tiles.render import RenderStyle, render_hexes, render_svg
from spectre_tiles.tiles import Patch, PlacedTile, default_s_curve

NS = "{http://www.w3.org/2000/svg}"


def segments(d: str) -> int:
    # every L draws one segment and Z closes the last one
    return d.count("L") + d.count("Z")


def paths(doc: str):
    return ET.fromstring(doc).iter(NS + "path")


def test_empty_patch():
    doc = render_svg(Patch([]))
    assert list(paths(doc)) == []
    assert ET.fromstring(doc).tag == NS + "svg"


def test_single_tile_has_fourteen_segments():
    doc = render_svg(Patch([PlacedTile("tile11", Isometry())]))
    (p,) = paths(doc)
    assert segments(p.get("d")) == 14


def test_curve_substitution_audit():
    curve = default_s_curve()
    patch = A.iterate(3).patch()
    doc = render_svg(patch, RenderStyle(curve=curve))
    ps = list(paths(doc))
    assert len(ps) == len(patch.tiles)
    per_edge = len(curve.samples) - 1
    assert all(segments(p.get("d")) == 14 * per_edge for p in ps)


def test_outlines_and_fills():
    patch = A.iterate(1).patch()
    style = RenderStyle.from_dict({"fills": {"spectre": "#123456"}, "stroke_width": 0.1})
    outline = patch.tiles[0].polygon
    doc = render_svg(patch, style, outlines=[outline])
    ps = list(paths(doc))
    assert sum(p.get("class") == "outline" for p in ps) == 1
    assert style.stroke_width == 0.1
    assert any(p.get("fill") == "#123456" for p in ps)


def test_coordinates_are_floats_of_exact_vertices():
    t = PlacedTile("hat", Isometry(3, False, A.iterate(1).patch().tiles[2].pose.trans))
    (p,) = paths(render_svg(Patch([t])))
    nums = [float(x) for x in re.findall(r"-?\d+\.\d+", p.get("d"))]
    want = [c for v in t.polygon.to_float() for c in v]
    assert all(abs(a - b) < 1e-4 for a, b in zip(nums, want))


def test_hexagon_drawing():
    comb = H.iterate("Δ", 1)
    doc = render_hexes(comb)
    root = ET.fromstring(doc)
    assert len(list(root.iter(NS + "path"))) == len(comb)
    texts = [t.text for t in root.iter(NS + "text")]
    assert texts.count("Γ") == 1 and len(texts) == 7 * len(comb)
