"""Command-line entry point: ``spectre-tiles <verb> ...``.

Verbs talk to each other only through files (patch files, JSON k-patch
lists, SVG).  Exit status: 0 success, 1 a check failed, 2 usage or input
error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# small parsers

_LEN = re.compile(r"^(?P<p>[+-]?\d+)?(?:(?P<sign>[+-])(?P<q>\d+)?\*?r)?$")
_ROOT = re.compile(r"^(?P<sign>[+-])?(?P<q>\d+)?\*?r$")


def parse_length(text: str):
    """'1', 'sqrt3', '√3', '2*sqrt3', '1+sqrt3' -> QSqrt3."""
    from .geometry import QSqrt3
    norm = re.sub(r"\s+", "", text).replace("sqrt(3)", "r").replace("sqrt3", "r").replace("√3", "r")
    m = _ROOT.match(norm) if "r" not in text.replace("sqrt", "") else None
    if m:
        return QSqrt3(0, int(m["q"] or 1) * (-1 if m["sign"] == "-" else 1))
    m = _LEN.match(norm) if "r" not in text.replace("sqrt", "") else None
    if not m or m["p"] is None:
        raise UsageError(f"cannot read edge length {text!r} (use forms like 1, sqrt3, 2+sqrt3)")
    q = int(m["q"] or 1) * (-1 if m["sign"] == "-" else 1) if m["sign"] else 0
    return QSqrt3(int(m["p"]), q)


def load_curve(path: str):
    """JSON: {"kind": "s-curve" | "free", "samples": [[x, y], ...]} with x, y as
    integers or fraction strings like "1/10"."""
    from .tiles import CurveSpec
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        pts = tuple((Fraction(str(x)), Fraction(str(y))) for x, y in data["samples"])
        return CurveSpec(pts, data.get("kind", "free"))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad curve file {path}: {exc}") from None


def curve_to_json(curve) -> str:
    return json.dumps({"kind": curve.kind, "samples": [[str(x), str(y)] for x, y in curve.samples]},
                      separators=(",", ":"))


def _curve_from_meta(text: str):
    from .tiles import CurveSpec
    data = json.loads(text)
    return CurveSpec(tuple((Fraction(x), Fraction(y)) for x, y in data["samples"]), data["kind"])


def _read(path: str):
    from .patchio import PatchFormatError, read_patch
    try:
        return read_patch(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except PatchFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True))


# ---------------------------------------------------------------------------
# k-patch lists as JSON

def _placement_json(p):
    return [p.name, p.rot, p.ti, p.tj, int(p.reflect)]


def kpatches_to_json(plist, shapes, chiral) -> dict:
    return {
        "format": "spectre-tiles-kpatches",
        "version": 1,
        "shapes": list(shapes),
        "chiral": chiral,
        "k": plist.k,
        "reduced": plist.reduced,
        "sizes": plist.sizes(),
        "hash": plist.content_hash(),
        "patches": [{"center": _placement_json(p.center),
                     "rings": [[_placement_json(q) for q in sorted(r)] for r in p.rings]}
                    for p in plist.patches],
    }


def _system(shapes, chiral):
    from . import kite_enum as ke
    makers = {"hat": ke.hat, "turtle": ke.turtle}
    bad = [s for s in shapes if s not in makers]
    if bad or not shapes:
        raise UsageError(f"unknown shape(s) {', '.join(bad) or '(none)'}; choose from hat, turtle")
    return ke.TileSystem([makers[s]() for s in shapes], chiral=chiral)


def kpatches_from_json(path: str):
    from . import kite_enum as ke
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("format") != "spectre-tiles-kpatches" or data.get("version") != 1:
            raise ValueError("not a k-patch list")
        system = _system(data["shapes"], data["chiral"])
        pats = [ke.KPatch(ke.Placement(c[0], c[1], c[2], c[3], bool(c[4])),
                          tuple(frozenset(ke.Placement(q[0], q[1], q[2], q[3], bool(q[4])) for q in r)
                                for r in p["rings"]))
                for c, p in ((p["center"], p) for p in data["patches"])]
    except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
        raise UsageError(f"bad k-patch file {path}: {exc}") from None
    return ke.KPatchList(data["k"], system, pats, bool(data["reduced"])), data


# ---------------------------------------------------------------------------
# verbs

def cmd_tile_build(args) -> int:
    from .geometry import is_simple, polygon_area
    from .render import RenderStyle, render_svg
    from .tiles import Patch, build_tile_ab, interior_angles
    a, b = parse_length(args.a), parse_length(args.b)
    try:
        P = build_tile_ab(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit({"a": repr(a), "b": repr(b), "vertices": len(P), "simple": is_simple(P),
           "area": repr(polygon_area(P)), "angles": interior_angles(P),
           "coords": [list(v) for v in P.vertices]})
    if args.svg:
        _write_text(args.svg, render_svg(Patch([]), RenderStyle(), outlines=[P]))
    return EXIT_OK


def cmd_spectre_curve(args) -> int:
    from .render import RenderStyle, render_svg
    from .geometry import Isometry
    from .tiles import SCHEME_ALT, SCHEME_S, Patch, PlacedTile, apply_edge_curve, check_reflection_blocking
    curve = load_curve(args.file)
    scheme = {"s": SCHEME_S, "alt": SCHEME_ALT}[args.scheme]
    try:
        rep = check_reflection_blocking(curve, scheme)
        bnd = None if curve.straight else apply_edge_curve(curve, scheme)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit({"scheme": scheme, "blocked": rep.blocked, "pairs_checked": rep.pairs_checked,
           "reflected_matches": [list(x) for x in rep.reflected_matches],
           "chiral_matches": len(rep.chiral_matches),
           "boundary_points": len(bnd.points) if bnd else None})
    if args.svg and bnd is not None:
        style = RenderStyle(curve=curve, scheme=scheme)
        _write_text(args.svg, render_svg(Patch([PlacedTile("spectre", Isometry())]), style))
    return EXIT_OK if rep.blocked else EXIT_FAIL


def cmd_enumerate(args) -> int:
    from . import kite_enum as ke
    shapes = [s.strip() for s in args.shapes.split(",") if s.strip()]
    system = _system(shapes, args.chiral)
    plist = ke.enumerate_1patches(system)
    if args.k > 1:
        plist = ke.reduce(plist)
        one = plist
        while plist.k < args.k:
            plist = ke.extend_k(plist, one)
    data = kpatches_to_json(plist, shapes, args.chiral)
    _write_text(args.out, json.dumps(data, separators=(",", ":")) + "\n")
    print(json.dumps({"k": plist.k, "reduced": plist.reduced, "sizes": data["sizes"],
                      "hash": data["hash"]}), file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_reduce(args) -> int:
    from . import kite_enum as ke
    plist, data = kpatches_from_json(args.input)
    red = ke.reduce(plist) if plist.k == 1 else ke.reduce_k(plist)
    out = kpatches_to_json(red, data["shapes"], data["chiral"])
    _write_text(args.out, json.dumps(out, separators=(",", ":")) + "\n")
    print(json.dumps({"before": plist.sizes(), "after": red.sizes(), "hash": out["hash"]}),
          file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_classify(args) -> int:
    from . import kite_enum as ke
    nine = ke.classify_nine()
    a = ke.full_analysis()
    _emit({
        "chain": {"t6h_forced_hats": a.notes.get("t6h_forced_hats"),
                  "hat_t7h_partners": a.notes.get("hat_t7h_partners")},
        "kinds": {k: {"tiles": c.tile_count, "labels": [str(x) for x in c.labels],
                      "edge_lengths": [len(s) - 1 for s in c.segments]}
                  for k, c in nine.items()},
    })
    return EXIT_OK if len(nine) == 9 else EXIT_FAIL


def cmd_hexsub(args) -> int:
    from . import hexsub
    from .patchio import PatchFile, write_patch
    args.seed = hexsub.ASCII_KINDS.get(args.seed, args.seed)
    if args.seed not in hexsub.KINDS:
        raise UsageError(f"unknown hexagon kind {args.seed!r}")
    comb = hexsub.iterate(args.seed, args.iters, args.rot)
    pf = PatchFile.from_comb(comb, seed=args.seed, iters=args.iters)
    if args.realize:
        real = hexsub.realize_geometry(comb, check=False)
        pf.tiles = list(real.patch.tiles)
    digest = write_patch(args.out, pf) if args.out else None
    print(json.dumps({"hexagons": len(comb), "counts": dict(comb.counts()), "valid": comb.is_valid(),
                      "tiles": len(pf.tiles), "sha256": digest}, ensure_ascii=False))
    return EXIT_OK


def cmd_compose(args) -> int:
    from . import hexsub
    from .patchio import PatchFile, write_patch
    pf = _read(args.input)
    if pf.hexes is None:
        raise UsageError(f"{args.input} holds no hexagon records")
    try:
        res = hexsub.compose(pf.comb(), strict=not args.lenient)
    except hexsub.HexsubError as exc:
        print(f"compose failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    digest = write_patch(args.out, PatchFile.from_comb(res.patch, **pf.meta)) if args.out else None
    print(json.dumps({"supertiles": len(res.patch), "unassigned": len(res.unassigned),
                      "incomplete": len(res.incomplete), "valid": res.patch.is_valid(),
                      "sha256": digest}))
    return EXIT_OK


def cmd_check_periodic(args) -> int:
    from . import hexsub
    pf = _read(args.input)
    if pf.hexes is None:
        raise UsageError("periodicity check needs a file with hexagon records (see the hexsub verb)")
    comb = pf.comb()
    real = hexsub.realize_geometry(comb, check=False)
    rep = hexsub.check_nonperiodic_tiles([p for p, _ in real.placements], args.max_shift)
    comb_ok = hexsub.check_nonperiodic(comb, args.hex_shift, trim=args.trim)
    _emit({"tiles": len(real.placements), "shifts_tested": rep.shifts_tested,
           "max_shift": rep.max_shift, "nonperiodic": rep.nonperiodic,
           "witness": list(rep.witness) if rep.witness else None,
           "hexagon_nonperiodic": comb_ok})
    return EXIT_OK if rep.nonperiodic and comb_ok else EXIT_FAIL


def cmd_assemble(args) -> int:
    from . import assembly as A
    from .patchio import PatchFile, write_patch
    unit = A.iterate(args.levels, args.seed)
    meta = {"levels": args.levels, "seed": args.seed}
    if args.curve:
        meta["curve"] = curve_to_json(load_curve(args.curve))
    pf = PatchFile.from_patch(unit.patch(), **meta)
    digest = write_patch(args.out, pf) if args.out else None
    st = A.stats(unit)
    print(json.dumps({"tiles": len(pf.tiles), "spectres": st.spectres, "mystics": st.mystics,
                      "even": st.even, "odd": st.odd, "sha256": digest}))
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import RenderStyle, render_hexes, render_svg
    from .tiles import SCHEME_ALT, SCHEME_S
    pf = _read(args.input)
    style = RenderStyle()
    if args.style:
        try:
            with open(args.style, encoding="utf-8") as fh:
                style = RenderStyle.from_dict(json.load(fh))
        except (OSError, ValueError) as exc:
            raise UsageError(f"bad style file {args.style}: {exc}") from None
    if args.curve:
        style.curve = load_curve(args.curve)
    elif "curve" in pf.meta and not args.straight:
        style.curve = _curve_from_meta(pf.meta["curve"])
    if args.scheme:
        style.scheme = {"s": SCHEME_S, "alt": SCHEME_ALT}[args.scheme]
    if args.hexes:
        if pf.hexes is None:
            raise UsageError(f"{args.input} holds no hexagon records")
        text = render_hexes(pf.comb(), style)
    else:
        text = render_svg(pf.patch(), style)
    _write_text(args.out, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import acceptance
    from .kite_enum import workers
    only = None
    if args.only:
        try:
            only = [int(x) for x in args.only.split(",")]
        except ValueError:
            raise UsageError(f"--only takes criterion numbers like 1,4,7, got {args.only!r}") from None
    results = acceptance.run_suite(args.suite, only, echo=print, workers=workers())
    rep = acceptance.report(results, args.suite)
    if args.json:
        _write_text(args.json, json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if rep["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spectre-tiles", description="Exact Spectre / hat / turtle tiling tools.")
    p.add_argument("--workers", type=int, help="worker processes (also SPECTRE_TILES_WORKERS)")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    tile = sub.add_parser("tile", help="Tile(a,b) polygons").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    tb = tile.add_parser("build", help="build Tile(a,b) and print its vertices")
    tb.add_argument("--a", default="1")
    tb.add_argument("--b", default="1")
    tb.add_argument("--svg", help="also draw it to this SVG file")
    tb.set_defaults(func=cmd_tile_build)

    sp = sub.add_parser("spectre", help="curved Spectre boundaries").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    sc = sp.add_parser("curve", help="apply a curve and check reflection blocking")
    sc.add_argument("--file", required=True, help="curve JSON")
    sc.add_argument("--scheme", choices=("s", "alt"), default="s")
    sc.add_argument("--svg")
    sc.set_defaults(func=cmd_spectre_curve)

    en = sub.add_parser("enumerate", help="enumerate k-patches of polykites")
    en.add_argument("--shapes", default="hat,turtle")
    en.add_argument("--chiral", action="store_true", help="forbid reflected copies")
    en.add_argument("--k", type=int, default=1)
    en.add_argument("--out", "-o")
    en.set_defaults(func=cmd_enumerate)

    rd = sub.add_parser("reduce", help="drop patches that cannot be surrounded")
    rd.add_argument("input")
    rd.add_argument("--out", "-o")
    rd.set_defaults(func=cmd_reduce)

    cl = sub.add_parser("classify", help="derive the nine marked clusters")
    cl.set_defaults(func=cmd_classify)

    hx = sub.add_parser("hexsub", help="iterate the marked-hexagon substitution")
    hx.add_argument("--seed", default="Δ", help="hexagon kind (Greek letter or ASCII name)")
    hx.add_argument("--iters", type=int, default=2)
    hx.add_argument("--rot", type=int, default=0)
    hx.add_argument("--realize", action="store_true", help="also write the hat/turtle tiles")
    hx.add_argument("--out", "-o")
    hx.set_defaults(func=cmd_hexsub)

    co = sub.add_parser("compose", help="group hexagons into supertiles")
    co.add_argument("input")
    co.add_argument("--out", "-o")
    co.add_argument("--lenient", action="store_true", help="do not fail on undecidable supertiles")
    co.set_defaults(func=cmd_compose)

    cp = sub.add_parser("check-periodic", help="exact translation scan of a hexagon patch")
    cp.add_argument("input")
    cp.add_argument("--max-shift", type=float, default=None)
    cp.add_argument("--hex-shift", type=int, default=8)
    cp.add_argument("--trim", type=int, default=2)
    cp.set_defaults(func=cmd_check_periodic)

    asm = sub.add_parser("assemble", help="Spectre / Mystic cluster substitution")
    asm.add_argument("--levels", type=int, default=2)
    asm.add_argument("--seed", choices=("spectre", "mystic"), default="spectre")
    asm.add_argument("--curve", help="curve JSON stored with the patch for rendering")
    asm.add_argument("--out", "-o")
    asm.set_defaults(func=cmd_assemble)

    rn = sub.add_parser("render", help="draw a patch file as SVG")
    rn.add_argument("input")
    rn.add_argument("--style", help="style JSON")
    rn.add_argument("--curve", help="curve JSON for the edges")
    rn.add_argument("--scheme", choices=("s", "alt"))
    rn.add_argument("--straight", action="store_true", help="ignore a curve stored in the patch")
    rn.add_argument("--hexes", action="store_true", help="draw the hexagon records")
    rn.add_argument("--out", "-o")
    rn.set_defaults(func=cmd_render)

    vf = sub.add_parser("verify", help="run the acceptance checks")
    vf.add_argument("--suite", choices=("fast", "proof", "full"), default="fast")
    vf.add_argument("--only", help="comma-separated criterion numbers")
    vf.add_argument("--json", help="write the machine-readable report here")
    vf.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers is not None:
        if args.workers < 1:
            print("spectre-tiles: --workers must be at least 1", file=sys.stderr)
            return EXIT_USAGE
        os.environ["SPECTRE_TILES_WORKERS"] = str(args.workers)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spectre-tiles: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
