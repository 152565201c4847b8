"""Selects the compiled predicate kernel when available.

Set ``SPECTRE_TILES_PURE=1`` to force the pure-Python kernel.  Calls whose
coordinates overflow the compiled kernel's 64-bit range are retried in
pure Python, so results never depend on which kernel is active.
"""
import os

from . import _kernels_py as _py

try:
    if os.environ.get("SPECTRE_TILES_PURE"):
        raise ImportError("pure kernel requested")
    from . import _core as _c
except ImportError:
    _c = None

BACKEND = "cython" if _c is not None else "python"


def _pick(name):
    fast = getattr(_c, name) if _c is not None else None
    slow = getattr(_py, name)
    if fast is None:
        return slow

    def call(*args):
        try:
            return fast(*args)
        except OverflowError:
            return slow(*args)

    call.__name__ = name
    call.__doc__ = slow.__doc__
    return call


sign_surd = _pick("sign_surd")
cross_sign = _pick("cross_sign")
orient_keys = _pick("orient_keys")
on_closed_segment = _pick("on_closed_segment")
cross_properly = _pick("cross_properly")
point_in_polygon_keys = _pick("point_in_polygon_keys")
interior_disjoint_keys = _pick("interior_disjoint_keys")
vertices_inside_edges = _pick("vertices_inside_edges")
