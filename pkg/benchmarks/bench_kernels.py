"""Compiled vs pure-Python predicate kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Micro-benchmarks call both kernel modules directly on the same inputs (and
check they agree); the end-to-end rows run the level-4 soundness check in a
subprocess, once with the compiled kernel and once with SPECTRE_TILES_PURE=1.
"""
import argparse
import os
import subprocess
import sys
import time
import timeit

from spectre_tiles import _kernels_py as pure
from spectre_tiles import assembly as A
from spectre_tiles.tiles import TILE11

try:
    from spectre_tiles import _core as fast
except ImportError:
    fast = None


def _inputs():
    polys = [TILE11.transformed(g) for g in A.iterate(3).spectres()]
    keys = [P.keys for P in polys]
    pairs = [(keys[i], keys[j]) for i in range(0, len(keys), 7) for j in range(i + 1, min(i + 9, len(keys)))]
    pts = [k[0] for k in keys[:200]]
    return keys, pairs, pts


def micro(repeat: int):
    keys, pairs, pts = _inputs()
    cases = {
        "sign_surd": lambda m: [m.sign_surd(p, q) for p in range(-40, 40) for q in range(-40, 40)],
        "orient_keys": lambda m: [m.orient_keys(a, b, c) for a, b, c in zip(pts, pts[1:], pts[2:])],
        "point_in_polygon_keys": lambda m: [m.point_in_polygon_keys(p, keys[0]) for p in pts],
        "interior_disjoint_keys": lambda m: [m.interior_disjoint_keys(a, b) for a, b in pairs],
        "vertices_inside_edges": lambda m: [m.vertices_inside_edges(a, b) for a, b in pairs],
    }
    rows = []
    for name, fn in cases.items():
        t_py = min(timeit.repeat(lambda: fn(pure), number=1, repeat=repeat))
        if fast is None:
            rows.append((name, t_py, None))
            continue
        if fn(pure) != fn(fast):
            raise SystemExit(f"{name}: compiled and pure kernels disagree")
        t_c = min(timeit.repeat(lambda: fn(fast), number=1, repeat=repeat))
        rows.append((name, t_py, t_c))
    return rows


def end_to_end(level: int):
    code = ("import time; from spectre_tiles import assembly as A, _kernels as K;"
            f"u = A.iterate({level}); t = time.perf_counter(); r = A.soundness(u);"
            "print(K.BACKEND, r.ok, time.perf_counter() - t)")
    out = {}
    for label, extra in (("compiled", {}), ("pure", {"SPECTRE_TILES_PURE": "1"})):
        env = dict(os.environ, **extra)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, ok, secs = res.stdout.split()
        out[label] = (backend, ok == "True", float(secs))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--level", type=int, default=4, help="assembly level for the end-to-end row")
    args = ap.parse_args(argv)
    print(f"{'kernel':26s} {'pure (ms)':>10s} {'cython (ms)':>12s} {'speedup':>8s}")
    for name, t_py, t_c in micro(args.repeat):
        if t_c is None:
            print(f"{name:26s} {t_py * 1e3:10.2f} {'n/a':>12s}")
        else:
            print(f"{name:26s} {t_py * 1e3:10.2f} {t_c * 1e3:12.2f} {t_py / t_c:7.1f}x")
    t0 = time.perf_counter()
    e2e = end_to_end(args.level)
    print(f"\nsoundness of level-{args.level} assembly ({time.perf_counter() - t0:.1f}s wall):")
    for label, (backend, ok, secs) in e2e.items():
        print(f"  {label:9s} backend={backend:7s} sound={ok} {secs:.2f}s")
    if e2e["compiled"][0] == "cython":
        print(f"  speedup {e2e['pure'][2] / e2e['compiled'][2]:.1f}x")


if __name__ == "__main__":
    main()
