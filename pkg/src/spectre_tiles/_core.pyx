# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact polygon predicates on embedding keys.

Same contract as ``_kernels_py``.  Arithmetic is done in 64-bit integers;
inputs with a coordinate above ``LIMIT`` raise OverflowError so the caller
can fall back to the arbitrary-precision version.
"""
from libc.stdlib cimport malloc, free

ctypedef long long i64

# keeps every intermediate (including the squares in _sign_surd) below 2**63
cdef i64 LIMIT = 2048


cdef inline int _sign_surd(i64 p, i64 q) nogil:
    if p >= 0 and q >= 0:
        return 1 if (p != 0 or q != 0) else 0
    if p <= 0 and q <= 0:
        return -1
    cdef i64 pp = p * p
    cdef i64 qq = 3 * q * q
    if p > 0:
        return 1 if pp > qq else -1
    return 1 if qq > pp else -1


cdef inline int _cross(i64 ua, i64 ub, i64 uc, i64 ud,
                       i64 va, i64 vb, i64 vc, i64 vd) nogil:
    return _sign_surd(ua * vc + 3 * ub * vd - uc * va - 3 * ud * vb,
                      ua * vd + ub * vc - uc * vb - ud * va)


cdef inline int _dot(i64 ua, i64 ub, i64 uc, i64 ud,
                     i64 va, i64 vb, i64 vc, i64 vd) nogil:
    return _sign_surd(ua * va + 3 * ub * vb + uc * vc + 3 * ud * vd,
                      ua * vb + ub * va + uc * vd + ud * vc)


cdef inline int _cross3(i64* a, i64* b, i64* c) nogil:
    return _cross(b[0] - a[0], b[1] - a[1], b[2] - a[2], b[3] - a[3],
                  c[0] - a[0], c[1] - a[1], c[2] - a[2], c[3] - a[3])


cdef inline bint _on_segment(i64* a, i64* b, i64* p) nogil:
    if _cross3(a, b, p) != 0:
        return False
    return _dot(a[0] - p[0], a[1] - p[1], a[2] - p[2], a[3] - p[3],
                b[0] - p[0], b[1] - p[1], b[2] - p[2], b[3] - p[3]) <= 0


cdef inline bint _cross_properly(i64* a, i64* b, i64* c, i64* d) nogil:
    cdef int d1 = _cross3(a, b, c)
    cdef int d2 = _cross3(a, b, d)
    if d1 * d2 >= 0:
        return False
    return _cross3(c, d, a) * _cross3(c, d, b) < 0


cdef int _pip(i64* p, i64* ks, int n) nogil:
    cdef int i, wn = 0, ya, yb
    cdef i64* ka
    cdef i64* kb
    for i in range(n):
        if _on_segment(ks + 4 * i, ks + 4 * ((i + 1) % n), p):
            return 0
    for i in range(n):
        ka = ks + 4 * i
        kb = ks + 4 * ((i + 1) % n)
        ya = _sign_surd(ka[2] - p[2], ka[3] - p[3])
        yb = _sign_surd(kb[2] - p[2], kb[3] - p[3])
        if ya <= 0 < yb:
            if _cross3(ka, kb, p) > 0:
                wn += 1
        elif yb <= 0 < ya:
            if _cross3(ka, kb, p) < 0:
                wn -= 1
    return 1 if wn != 0 else -1


cdef i64* _load(object ks, int scale) except NULL:
    cdef int n = len(ks)
    cdef i64* out = <i64*> malloc(4 * n * sizeof(i64))
    cdef int i, j
    cdef i64 v
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        t = ks[i]
        for j in range(4):
            v = t[j]
            if v > LIMIT or v < -LIMIT:
                free(out)
                raise OverflowError("coordinate too large for the compiled kernel")
            out[4 * i + j] = v * scale
    return out


def sign_surd(p, q):
    if abs(p) > 1 << 30 or abs(q) > 1 << 30:
        raise OverflowError("value too large for the compiled kernel")
    return _sign_surd(p, q)


def cross_sign(u, v):
    cdef i64* a = _load((u, v), 1)
    cdef int r = _cross(a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7])
    free(a)
    return r


def orient_keys(a, b, c):
    cdef i64* k = _load((a, b, c), 1)
    cdef int r = _cross3(k, k + 4, k + 8)
    free(k)
    return r


def on_closed_segment(a, b, p):
    cdef i64* k = _load((a, b, p), 1)
    cdef bint r = _on_segment(k, k + 4, k + 8)
    free(k)
    return r


def cross_properly(a, b, c, d):
    cdef i64* k = _load((a, b, c, d), 1)
    cdef bint r = _cross_properly(k, k + 4, k + 8, k + 12)
    free(k)
    return r


def point_in_polygon_keys(p, ks):
    cdef i64* kp = _load((p,), 1)
    cdef i64* kk
    try:
        kk = _load(ks, 1)
    except OverflowError:
        free(kp)
        raise
    cdef int r = _pip(kp, kk, len(ks))
    free(kp)
    free(kk)
    return r


cdef bint _disjoint(i64* P, int n, i64* Q, int m, i64* P2, i64* Q2) nogil:
    cdef int i, j
    cdef i64 t[4]
    cdef i64* a
    cdef i64* b
    for i in range(n):
        for j in range(m):
            if _cross_properly(P + 4 * i, P + 4 * ((i + 1) % n),
                               Q + 4 * j, Q + 4 * ((j + 1) % m)):
                return False
    # vertices and edge midpoints of each polygon, doubled, against the other
    for i in range(m):
        a = Q + 4 * i
        b = Q + 4 * ((i + 1) % m)
        for j in range(4):
            t[j] = 2 * a[j]
        if _pip(t, P2, n) > 0:
            return False
        for j in range(4):
            t[j] = a[j] + b[j]
        if _pip(t, P2, n) > 0:
            return False
    for i in range(n):
        a = P + 4 * i
        b = P + 4 * ((i + 1) % n)
        for j in range(4):
            t[j] = 2 * a[j]
        if _pip(t, Q2, m) > 0:
            return False
        for j in range(4):
            t[j] = a[j] + b[j]
        if _pip(t, Q2, m) > 0:
            return False
    return True


def interior_disjoint_keys(pk, qk):
    cdef int n = len(pk), m = len(qk)
    cdef i64* P = _load(pk, 1)
    cdef i64* Q = NULL
    cdef i64* P2 = NULL
    cdef i64* Q2 = NULL
    cdef bint r
    try:
        Q = _load(qk, 1)
        P2 = _load(pk, 2)
        Q2 = _load(qk, 2)
        r = _disjoint(P, n, Q, m, P2, Q2)
    finally:
        free(P)
        free(Q)
        free(P2)
        free(Q2)
    if r and set(pk) == set(qk):
        return False
    return r


def vertices_inside_edges(pk, qk):
    cdef int n = len(pk), m = len(qk)
    cdef i64* P = _load(pk, 1)
    cdef i64* Q = NULL
    cdef int i, j
    qset = set(qk)
    out = []
    try:
        Q = _load(qk, 1)
        for i in range(n):
            if pk[i] in qset:
                continue
            for j in range(m):
                if _on_segment(Q + 4 * j, Q + 4 * ((j + 1) % m), P + 4 * i):
                    out.append(i)
                    break
    finally:
        free(P)
        free(Q)
    return out
