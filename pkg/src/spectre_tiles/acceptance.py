"""The acceptance criteria as runnable checks.

Each check returns a ``Result``; ``run_suite`` runs a named subset.  The
``fast`` suite uses smaller parameters where a criterion allows it, ``proof``
covers the enumeration and hexagon results and ``full`` runs all eleven at
full size.
"""
from __future__ import annotations

import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _check(number: int, name: str):
    def wrap(fn):
        def run(**kw) -> Result:
            t = time.perf_counter()
            try:
                ok, detail, data = fn(**kw)
            except Exception as exc:  # a crash is a failure, reported with its message
                ok, detail, data = False, f"error: {type(exc).__name__}: {exc}", {}
            return Result(number, name, bool(ok), detail, time.perf_counter() - t, data)
        run.number = number
        run.criterion_name = name
        return run
    return wrap


@_check(1, "tile construction")
def c1_tiles():
    from .geometry import Polygon, congruence, is_simple
    from .kitegrid import boundary_cycle, pack
    from .tiles import HAT_CELLS, SQRT3_EXACT, TURTLE_CELLS, build_tile_ab, interior_angles
    P = build_tile_ab(1, 1)
    angles = interior_angles(P)
    ok = (len(P) == 14 and is_simple(P) and all(e.norm2() == 1 for e in P.edges())
          and all(a % 90 == 0 or a % 120 == 0 for a in angles) and angles.count(180) == 1)
    kites = {}
    for name, cells in (("hat", HAT_CELLS), ("turtle", TURTLE_CELLS)):
        kites[name] = _corners(Polygon(boundary_cycle(pack(*c) for c in cells)))
    hat_ok = congruence(_corners(build_tile_ab(1, SQRT3_EXACT)), kites["hat"]) is not None
    tur_ok = congruence(_corners(build_tile_ab(SQRT3_EXACT, 1)), kites["turtle"]) is not None
    detail = (f"simple 14-gon={ok} angles={angles}; Tile(1,sqrt3)~8-kite={hat_ok} "
              f"Tile(sqrt3,1)~10-kite={tur_ok}")
    return ok and hat_ok and tur_ok, detail, {}


def _corners(P):
    """Drop vertices where the boundary goes straight on."""
    from .geometry import Polygon, direction_index
    vs = P.vertices
    n = len(vs)
    return Polygon([vs[i] for i in range(n)
                    if direction_index(vs[i] - vs[i - 1])[0] != direction_index(vs[(i + 1) % n] - vs[i])[0]])


@_check(2, "chiral hat/turtle 1-patches")
def c2_one_patches():
    from . import kite_enum as ke
    a = ke.analyze_hat_turtle()
    red = a.reduced
    turtles = [p for p in red.patches if p.center.name == "turtle"]
    hats = [p for p in red.patches if p.center.name == "hat"]
    all_hat = [p for p in turtles if set(p.shape_counts()) == {"hat"}]
    all_tur = [p for p in hats if set(p.shape_counts()) == {"turtle"}]
    t_rest = all(p.shape_counts().get("hat", 0) <= 1 for p in turtles if p not in all_hat)
    h_rest = all(p.shape_counts().get("turtle", 0) <= 1 for p in hats if p not in all_tur)
    chiral = all(not q.reflect for p in red.patches for q in p.tiles())
    ok = len(all_hat) == 1 and len(all_tur) == 1 and t_rest and h_rest and chiral
    detail = (f"reduced {red.sizes()} from raw {a.raw.sizes()}; all-hat turtle patches={len(all_hat)}, "
              f"all-turtle hat patches={len(all_tur)}, others<=1: {t_rest and h_rest}")
    return ok, detail, {"sizes": red.sizes()}


@_check(3, "forcing chain T6H -> T7H -> T8H")
def c3_forcing(levels: int = 3):
    from . import hexsub, kite_enum as ke
    a = ke.full_analysis()
    t6 = [p for p in a.t6h_lists[1].patches if p.center.name == "T6H"]
    forced_everywhere = all(a.forced_hat in p.corona for p in t6)
    h7 = [p for p in a.t7h_lists[1].patches if p.center.name == "hat"]
    joins = all(a.t8h_partner in p.corona for p in h7)
    comb = hexsub.iterate("Δ", levels)
    real = hexsub.realize_geometry(comb, check=False)
    dec = ke.compose_t6h_t7h_t8h([p for p, _ in real.placements], a)
    inner = comb.interior(1)
    hex_of = dict(real.placements)
    wrong = 0
    for p, hp in real.placements:
        if hp not in inner:
            continue
        if p not in dec.owner:
            wrong += 1
            continue
        kind, _pose, members = dec.clusters[dec.owner[p]]
        if {hex_of[m] for m in members} != {hp} or (kind == "T7H") != (comb.nodes[hp][0] == "Γ"):
            wrong += 1
    ok = forced_everywhere and joins and not dec.conflicts and wrong == 0 and a.notes.get("t7h_double_partner") == 0
    detail = (f"T6H patches={len(t6)} all with forced hat={forced_everywhere}; free-hat patches={len(h7)} "
              f"all join T7H={joins}; decomposition of {len(real.placements)} tiles: conflicts="
              f"{len(dec.conflicts)}, interior mismatches={wrong}")
    return ok, detail, {}


@_check(4, "nine marked clusters")
def c4_nine(table: dict | None = None):
    from . import kite_enum as ke
    from .hexsub import HEXAGON_TABLE, EdgeLabel
    table = HEXAGON_TABLE if table is None else table
    types = ke.cluster_types(ke.full_analysis().cluster_lists[1])
    try:
        kind_of, label_of = ke.bridge(types, table)
    except ke.BridgeError as exc:
        return False, f"bridge failed for kind(s) {', '.join(exc.kinds) or '?'}: {exc}", {"kinds": exc.kinds}
    counts = {kind: len(types[key].polykite.members) for key, (kind, _off) in kind_of.items()}
    gamma = Counter(str(x) for x in table.get("Γ", ()))
    want = Counter(str(EdgeLabel.parse(x)) for x in ("α-", "α+", "β-", "β+", "γ-", "δ-"))
    ok = (len(types) == 9 and counts.get("Γ") == 8
          and all(v == 9 for k, v in counts.items() if k != "Γ") and gamma == want)
    detail = (f"kinds={len(types)} tile counts={dict(sorted(counts.items(), key=lambda kv: kv[0] != 'Γ'))} "
              f"Γ labels ok={gamma == want}; bridge matched all 9 kinds, {len({str(v) for v in label_of.values()})} signed edge labels used")
    return ok, detail, {}


@_check(5, "supertiles from reduced 5-patches")
def c5_supertiles(k: int = 5):
    from . import hexsub
    lists = hexsub.hex_kpatches(k)
    top = lists[-1]
    an = hexsub.supertile_analysis(top)
    layouts = {(kind, hexsub._layout_contents(kind)) for kind in hexsub.KINDS}
    seen = {(kind, cont + ((None,) if len(cont) == 7 else ())) for kind, cont in an["contents"]}
    ok = len(an["contents"]) == 9 and seen == layouts and not an["failures"] and top.reduced
    sizes = [len(x.patches) for x in lists]
    detail = (f"reduced k-patch counts k=1..{k}: {sizes}; supertile contents={len(an['contents'])} "
              f"(match layouts={seen == layouts}); assignment failures={len(an['failures'])}")
    return ok, detail, {"sizes": sizes}


@_check(6, "substitute/compose inverse")
def c6_inverse(trials: int = 1000, seed: int = 2024):
    from . import hexsub
    rng = random.Random(seed)
    bad_valid = bad_inv = 0
    for _ in range(trials):
        v, i = hexsub.inverse_trial(rng, rng.randrange(50, 120))
        bad_valid += not v
        bad_inv += not i
    return bad_valid == 0 and bad_inv == 0, (
        f"{trials} random patches of 50-119 hexagons: invalid substitutions={bad_valid}, "
        f"round-trip failures={bad_inv}"), {}


@_check(7, "counts and 4+sqrt15")
def c7_counts(geometric_levels: int = 5):
    from . import assembly as A
    ok = True
    for n in range(0, 9):
        m = _matpow(A.SUBST_MATRIX, n)
        if A.count_vector(n) != (m[0][0], m[1][0]) or A.count_vector(n, A.MYSTIC) != (m[0][1], m[1][1]):
            ok = False
    lvl2 = A.count_vector(2)
    ok &= lvl2 == (55, 8)
    for n in range(0, geometric_levels + 1):
        st = A.stats(A.iterate(n))
        lone, myst = A.count_vector(n)
        ok &= st.spectres == lone + 2 * myst and st.mystics == myst
    lam = 4 + math.sqrt(15)
    r12 = float(A.ratio_sequence(12)[-1])
    conv = abs(r12 - lam) < 1e-6
    lp, lm = A.subst_matrix_eigen()
    eig = (lp.a, lp.b, lp.r) == (4, 1, 15) and lp * lm == A.Surd(Fraction(1), Fraction(0), 15)
    return ok and conv and eig, (f"matrix powers ok={ok}; level 2 = {lvl2}; even/odd at level 12 = {r12:.10f} "
                                 f"(|diff|={abs(r12 - lam):.2e}); eigenvalues {lp}, {lm}"), {}


def _matpow(m, n):
    r = ((1, 0), (0, 1))
    for _ in range(n):
        r = tuple(tuple(sum(r[i][k] * m[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return r


@_check(8, "geometric soundness")
def c8_soundness(level: int = 4):
    from . import assembly as A
    rep = A.soundness(A.iterate(level))
    hands = []
    for n in range(1, level + 1):
        hs = {g.reflect for g in A.iterate(n).spectres()}
        hands.append(hs)
    alternating = all(len(h) == 1 for h in hands) and all(
        hands[i] != hands[i + 1] for i in range(len(hands) - 1))
    return rep.ok and alternating, (
        f"level {level}: {rep.tiles} tiles, overlaps={len(rep.overlaps)}, vertex-to-vertex violations="
        f"{len(rep.v2v_violations)}, straight runs > 2: {rep.long_segments}; handedness per level "
        f"{['R' if h == {True} else 'U' if h == {False} else 'mixed' for h in hands]}"), {}


@_check(9, "non-periodicity and transport")
def c9_nonperiodic(levels: tuple = (3, 4)):
    from . import assembly as A, hexsub
    from .tiles import ODD, SQRT3_EXACT, resize_edges
    out = []
    ok = True
    for lv in levels:
        comb = hexsub.iterate("Δ", lv - 1)
        real = hexsub.realize_geometry(comb, check=False)
        rep = hexsub.check_nonperiodic_tiles([p for p, _ in real.placements])
        out.append(f"level {lv}: {len(real.placements)} tiles, {rep.shifts_tested} shifts, nonperiodic={rep.nonperiodic}")
        ok &= rep.nonperiodic
    # transport: resizing is the linear map that scales the odd-direction part by sqrt3
    patch = A.iterate(3).patch()
    moved = resize_edges(patch, ODD, SQRT3_EXACT)
    groups: dict = {}
    for t0, t1 in zip(patch.tiles, moved.tiles):
        groups.setdefault((t0.pose.rot, t0.pose.reflect), []).append((t0.pose.trans, t1.pose.trans))
    pairs = mism = 0
    for items in groups.values():
        base0, base1 = items[0]
        for a0, a1 in items[1:]:
            pairs += 1
            if a1 - base1 != odd_to_sqrt3(a0 - base0):
                mism += 1
    out.append(f"transport pairs={pairs} mismatches={mism}")
    return ok and mism == 0 and pairs > 0, "; ".join(out), {}


def odd_to_sqrt3(v):
    """Image of a Tile(1,1) translation when odd-direction edges become sqrt3 long."""
    from .geometry import Coord4
    c0, c1, c2, c3 = v
    # sqrt3*u(1) = u(0) + u(2) and sqrt3*u(3) = 2u(2) - u(0)
    return Coord4(c0 + c1 - c3, 0, c2 + c1 + 2 * c3, 0)


@_check(10, "reflection blocking")
def c10_blocking():
    from .tiles import (SCHEME_ALT, SCHEME_S, asymmetric_curve, check_reflection_blocking,
                        default_s_curve, straight_curve)
    s = check_reflection_blocking(default_s_curve(), SCHEME_S)
    a = check_reflection_blocking(asymmetric_curve(), SCHEME_ALT)
    c = check_reflection_blocking(straight_curve(), SCHEME_S)
    ok = s.blocked and a.blocked and not c.blocked and s.pairs_checked == 196
    return ok, (f"s-curve blocked={s.blocked}, alternating asymmetric blocked={a.blocked}, "
                f"straight control blocked={c.blocked} ({len(c.reflected_matches)} reflected matings)"), {}


@_check(11, "hexsub geometry equals resized assembly")
def c11_cross(levels: tuple = (2, 3)):
    from . import assembly as A, hexsub
    from .tiles import ODD, SQRT3_EXACT, resize_edges
    out, ok = [], True
    for lv in levels:
        resized = resize_edges(A.iterate(lv).patch(), ODD, SQRT3_EXACT)
        real = hexsub.realize_geometry(hexsub.iterate("Δ", lv - 1)).patch
        g = hexsub.congruent_patches(real, resized)
        out.append(f"assembly level {lv} ({len(resized)} tiles) vs hexsub level {lv - 1}: "
                   f"{'congruent' if g else 'different'}{' (mirror)' if g and g.reflect else ''}")
        ok &= g is not None
    return ok, "; ".join(out), {}


ALL = (c1_tiles, c2_one_patches, c3_forcing, c4_nine, c5_supertiles, c6_inverse,
       c7_counts, c8_soundness, c9_nonperiodic, c10_blocking, c11_cross)

SUITES = {
    "fast": [(c1_tiles, {}), (c2_one_patches, {}), (c6_inverse, {"trials": 100}),
             (c7_counts, {"geometric_levels": 3}), (c8_soundness, {"level": 3}),
             (c10_blocking, {})],
    "proof": [(c2_one_patches, {}), (c3_forcing, {}), (c4_nine, {}), (c5_supertiles, {})],
    "full": [(c, {}) for c in ALL],
}


def _run_one(number: int, kw: dict) -> Result:
    return ALL[number - 1](**kw)


def run_suite(name: str = "full", only: list[int] | None = None, echo=None,
              workers: int = 1) -> list[Result]:
    """Run a suite; with ``workers`` > 1 criteria run in separate processes."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r} (choose from {', '.join(SUITES)})")
    jobs = [(fn.number, kw) for fn, kw in SUITES[name] if not only or fn.number in only]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(min(workers, len(jobs))) as pool:
            out = list(pool.map(_run_one, *zip(*jobs)))
        if echo:
            for r in out:
                echo(r.line())
        return out
    out = []
    for number, kw in jobs:
        r = _run_one(number, kw)
        out.append(r)
        if echo:
            echo(r.line())
    return out


def report(results: list[Result], suite: str) -> dict:
    """Machine-readable summary (no timestamps, so reruns compare equal apart from timings)."""
    return {
        "suite": suite,
        "passed": all(r.passed for r in results),
        "criteria": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail,
                      "seconds": round(r.seconds, 3)} for r in results],
    }
