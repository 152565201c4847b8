"""Pure-Python exact polygon predicates on embedding keys.

A key ``(a, b, c, d)`` stands for the point ((a + b*sqrt3)/2, (c + d*sqrt3)/2).
The compiled ``_core`` module exports the same functions.
"""


def sign_surd(p, q):
    """Sign of p + q*sqrt3."""
    if p >= 0 and q >= 0:
        return 1 if (p or q) else 0
    if p <= 0 and q <= 0:
        return -1
    pp, qq = p * p, 3 * q * q
    if p > 0:
        return 1 if pp > qq else -1
    return 1 if qq > pp else -1


def cross_sign(u, v):
    ua, ub, uc, ud = u
    va, vb, vc, vd = v
    return sign_surd(ua * vc + 3 * ub * vd - uc * va - 3 * ud * vb,
                     ua * vd + ub * vc - uc * vb - ud * va)


def _dot_sign(u, v):
    ua, ub, uc, ud = u
    va, vb, vc, vd = v
    return sign_surd(ua * va + 3 * ub * vb + uc * vc + 3 * ud * vd,
                     ua * vb + ub * va + uc * vd + ud * vc)


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def orient_keys(a, b, c):
    return cross_sign(_sub(b, a), _sub(c, a))


def on_closed_segment(a, b, p):
    """p on the closed segment ab."""
    if cross_sign(_sub(b, a), _sub(p, a)) != 0:
        return False
    return _dot_sign(_sub(a, p), _sub(b, p)) <= 0


def cross_properly(a, b, c, d):
    ab, cd = _sub(b, a), _sub(d, c)
    d1 = cross_sign(ab, _sub(c, a))
    d2 = cross_sign(ab, _sub(d, a))
    if d1 * d2 >= 0:
        return False
    d3 = cross_sign(cd, _sub(a, c))
    d4 = cross_sign(cd, _sub(b, c))
    return d3 * d4 < 0


def point_in_polygon_keys(p, ks):
    """+1 inside, 0 on the boundary, -1 outside."""
    n = len(ks)
    for i in range(n):
        if on_closed_segment(ks[i], ks[(i + 1) % n], p):
            return 0
    wn = 0
    for i in range(n):
        ka, kb = ks[i], ks[(i + 1) % n]
        ya = sign_surd(ka[2] - p[2], ka[3] - p[3])
        yb = sign_surd(kb[2] - p[2], kb[3] - p[3])
        if ya <= 0 < yb:
            if cross_sign(_sub(kb, ka), _sub(p, ka)) > 0:
                wn += 1
        elif yb <= 0 < ya:
            if cross_sign(_sub(kb, ka), _sub(p, ka)) < 0:
                wn -= 1
    return 1 if wn != 0 else -1


def interior_disjoint_keys(pk, qk):
    """Open interiors of two simple polygons (key cycles) are disjoint."""
    n, m = len(pk), len(qk)
    for i in range(n):
        a, b = pk[i], pk[(i + 1) % n]
        for j in range(m):
            if cross_properly(a, b, qk[j], qk[(j + 1) % m]):
                return False
    p2 = [(x[0] * 2, x[1] * 2, x[2] * 2, x[3] * 2) for x in pk]
    q2 = [(x[0] * 2, x[1] * 2, x[2] * 2, x[3] * 2) for x in qk]
    for a2, bk in ((p2, qk), (q2, pk)):
        nb = len(bk)
        for i in range(nb):
            a, b = bk[i], bk[(i + 1) % nb]
            if point_in_polygon_keys((a[0] * 2, a[1] * 2, a[2] * 2, a[3] * 2), a2) > 0:
                return False
            mid = (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
            if point_in_polygon_keys(mid, a2) > 0:
                return False
    if set(pk) == set(qk):
        return False
    return True


def vertices_inside_edges(pk, qk):
    """Indices of vertices of P lying in the open interior of an edge of Q."""
    qset = set(qk)
    m = len(qk)
    out = []
    for idx, p in enumerate(pk):
        if p in qset:
            continue
        for j in range(m):
            if on_closed_segment(qk[j], qk[(j + 1) % m], p):
                out.append(idx)
                break
    return out
