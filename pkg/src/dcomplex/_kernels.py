"""Hot loops for normal curves: admissibility, tracing, cutting, enumeration.

All functions take plain int64 arrays so they compile under numba and also
run unchanged as Python (see ``_jit``).

Conventions.  Side ``j`` of triangle ``t`` runs from corner ``j`` to corner
``j + 1``.  Corner ``j`` lies between sides ``j - 1`` and ``j``, and carries
``c[t, j]`` normal arcs numbered ``k = 0, 1, ...`` outward from the corner.
Crossing points on edge ``e`` are numbered ``0 .. w[e] - 1`` from the edge's
tail; globally a crossing is ``offs[e] + p``.
Regions of a triangle: the central region, and for each corner ``j`` the
regions ``R(j, k)`` on the corner side of arc ``k`` (``R(j, 0)`` touches the
puncture).
"""

from __future__ import annotations

import numpy as np

from ._jit import njit


@njit
def corner_counts(w, tri_edge):
    """Corner arc counts; ``ok`` is False if some count is negative or half-integral."""
    T = tri_edge.shape[0]
    c = np.zeros((T, 3), dtype=np.int64)
    ok = True
    for t in range(T):
        for j in range(3):
            s = w[tri_edge[t, (j + 2) % 3]] + w[tri_edge[t, j]] - w[tri_edge[t, (j + 1) % 3]]
            if s < 0 or s % 2 != 0:
                ok = False
                c[t, j] = -1
            else:
                c[t, j] = s // 2
    return c, ok


@njit
def build_arcs(w, tri_edge, tri_sign, c):
    """Lay out every normal arc and its two crossing points.

    Returns ``offs``, ``arc_meta`` (t, corner, k), ``arc_x`` (crossing at the
    endpoint on side ``j - 1`` and on side ``j``), ``arc_low`` (which bank,
    0 = corner side, faces lower edge positions at each endpoint) and
    ``cross_end`` (the two arc endpoints ``2 * arc + end`` at each crossing).
    """
    E = w.shape[0]
    T = tri_edge.shape[0]
    offs = np.zeros(E + 1, dtype=np.int64)
    for e in range(E):
        offs[e + 1] = offs[e] + w[e]
    n_cross = offs[E]
    n_arcs = 0
    for t in range(T):
        for j in range(3):
            n_arcs += c[t, j]
    arc_meta = np.zeros((n_arcs, 3), dtype=np.int64)
    arc_x = np.zeros((n_arcs, 2), dtype=np.int64)
    arc_low = np.zeros((n_arcs, 2), dtype=np.int64)
    cross_end = np.full((n_cross, 2), -1, dtype=np.int64)
    a = 0
    for t in range(T):
        for j in range(3):
            sp = (j + 2) % 3
            e0 = tri_edge[t, sp]
            e1 = tri_edge[t, j]
            for k in range(c[t, j]):
                pos0 = w[e0] - 1 - k
                p0 = pos0 if tri_sign[t, sp] == 1 else w[e0] - 1 - pos0
                pos1 = k
                p1 = pos1 if tri_sign[t, j] == 1 else w[e1] - 1 - pos1
                x0 = offs[e0] + p0
                x1 = offs[e1] + p1
                arc_meta[a, 0] = t
                arc_meta[a, 1] = j
                arc_meta[a, 2] = k
                arc_x[a, 0] = x0
                arc_x[a, 1] = x1
                # On side j-1 the corner sits at the high end of the side.
                arc_low[a, 0] = 0 if tri_sign[t, sp] == -1 else 1
                arc_low[a, 1] = 0 if tri_sign[t, j] == 1 else 1
                if cross_end[x0, 0] < 0:
                    cross_end[x0, 0] = 2 * a
                else:
                    cross_end[x0, 1] = 2 * a
                if cross_end[x1, 0] < 0:
                    cross_end[x1, 0] = 2 * a + 1
                else:
                    cross_end[x1, 1] = 2 * a + 1
                a += 1
    return offs, arc_meta, arc_x, arc_low, cross_end


@njit
def trace_arcs(arc_x, cross_end):
    """Label each arc with its connected component; returns ``(n_comp, comp)``."""
    n_arcs = arc_x.shape[0]
    comp = np.full(n_arcs, -1, dtype=np.int64)
    n_comp = 0
    for a0 in range(n_arcs):
        if comp[a0] >= 0:
            continue
        cur = a0
        ent = 0
        while comp[cur] < 0:
            comp[cur] = n_comp
            leave = 1 - ent
            xo = arc_x[cur, leave]
            me = 2 * cur + leave
            i0 = cross_end[xo, 0]
            nxt = cross_end[xo, 1] if i0 == me else i0
            cur = nxt // 2
            ent = nxt % 2
        n_comp += 1
    return n_comp, comp


@njit
def component_coords(w, offs, arc_x, comp, n_comp):
    """Edge weights of each component (each crossing counted once)."""
    E = w.shape[0]
    out = np.zeros((n_comp, E), dtype=np.int64)
    cross_edge = np.zeros(offs[E], dtype=np.int64)
    for e in range(E):
        for p in range(w[e]):
            cross_edge[offs[e] + p] = e
    for a in range(arc_x.shape[0]):
        # Every crossing is met by two arc endpoints of the same component.
        out[comp[a], cross_edge[arc_x[a, 0]]] += 1
        out[comp[a], cross_edge[arc_x[a, 1]]] += 1
    for i in range(n_comp):
        for e in range(E):
            out[i, e] //= 2
    return out


@njit
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit
def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra != rb:
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb


@njit
def _region_offsets(c):
    T = c.shape[0]
    roff = np.zeros(T + 1, dtype=np.int64)
    coff = np.zeros((T, 3), dtype=np.int64)
    for t in range(T):
        acc = 0
        for j in range(3):
            coff[t, j] = acc
            acc += c[t, j]
        roff[t + 1] = roff[t] + 1 + acc
    return roff, coff


@njit
def _side_region(roff, coff, c, t, j, q, w_side):
    cj = c[t, j]
    if q < cj:
        return roff[t] + 1 + coff[t, j] + q
    if q == cj:
        return roff[t]
    j1 = (j + 1) % 3
    return roff[t] + 1 + coff[t, j1] + (w_side - q)


@njit
def cut_regions(w, tri_edge, tri_sign, tri_vert, edge_sides, n_vertices, c, arc_meta, arc_x, arc_low, cross_end, comp, cut):
    """Pieces of the surface cut along the components with ``cut[comp]`` set.

    Returns dense piece labels for regions, segments, vertices and arc banks
    (``bank_piece[a, b]`` for ``b = 0`` corner side, ``1`` far side), plus a
    dense bank-class label per arc bank so the two sides of each cut
    component can be told apart.
    """
    T = tri_edge.shape[0]
    E = w.shape[0]
    roff, coff = _region_offsets(c)
    n_reg = roff[T]
    parent = np.arange(n_reg)
    n_seg = 0
    for e in range(E):
        n_seg += w[e] + 1
    seg_region = np.zeros(n_seg, dtype=np.int64)
    s_id = 0
    for e in range(E):
        ta = edge_sides[e, 0, 0]
        ja = edge_sides[e, 0, 1]
        tb = edge_sides[e, 1, 0]
        jb = edge_sides[e, 1, 1]
        for s in range(w[e] + 1):
            qa = s if tri_sign[ta, ja] == 1 else w[e] - s
            qb = s if tri_sign[tb, jb] == 1 else w[e] - s
            ra = _side_region(roff, coff, c, ta, ja, qa, w[e])
            rb = _side_region(roff, coff, c, tb, jb, qb, w[e])
            _union(parent, ra, rb)
            seg_region[s_id] = ra
            s_id += 1
    n_arcs = arc_meta.shape[0]
    corner_reg = np.zeros(n_arcs, dtype=np.int64)
    far_reg = np.zeros(n_arcs, dtype=np.int64)
    for a in range(n_arcs):
        t = arc_meta[a, 0]
        j = arc_meta[a, 1]
        k = arc_meta[a, 2]
        corner_reg[a] = roff[t] + 1 + coff[t, j] + k
        if k + 1 < c[t, j]:
            far_reg[a] = roff[t] + 1 + coff[t, j] + k + 1
        else:
            far_reg[a] = roff[t]
        if not cut[comp[a]]:
            _union(parent, corner_reg[a], far_reg[a])
    label = np.full(n_reg, -1, dtype=np.int64)
    region_piece = np.zeros(n_reg, dtype=np.int64)
    n_pieces = 0
    for r in range(n_reg):
        root = _find(parent, r)
        if label[root] < 0:
            label[root] = n_pieces
            n_pieces += 1
        region_piece[r] = label[root]
    seg_piece = np.zeros(n_seg, dtype=np.int64)
    for s in range(n_seg):
        seg_piece[s] = region_piece[seg_region[s]]
    vertex_piece = np.full(n_vertices, -1, dtype=np.int64)
    for t in range(T):
        for j in range(3):
            v = tri_vert[t, j]
            if vertex_piece[v] < 0:
                if c[t, j] >= 1:
                    vertex_piece[v] = region_piece[roff[t] + 1 + coff[t, j]]
                else:
                    vertex_piece[v] = region_piece[roff[t]]
    bparent = np.arange(2 * n_arcs)
    for x in range(cross_end.shape[0]):
        i0 = cross_end[x, 0]
        i1 = cross_end[x, 1]
        a0 = i0 // 2
        a1 = i1 // 2
        l0 = arc_low[a0, i0 % 2]
        l1 = arc_low[a1, i1 % 2]
        _union(bparent, 2 * a0 + l0, 2 * a1 + l1)
        _union(bparent, 2 * a0 + 1 - l0, 2 * a1 + 1 - l1)
    bank_piece = np.zeros((n_arcs, 2), dtype=np.int64)
    bank_class = np.zeros((n_arcs, 2), dtype=np.int64)
    blabel = np.full(2 * n_arcs, -1, dtype=np.int64)
    n_banks = 0
    for a in range(n_arcs):
        bank_piece[a, 0] = region_piece[corner_reg[a]]
        bank_piece[a, 1] = region_piece[far_reg[a]]
        for b in range(2):
            root = _find(bparent, 2 * a + b)
            if blabel[root] < 0:
                blabel[root] = n_banks
                n_banks += 1
            bank_class[a, b] = blabel[root]
    return n_pieces, region_piece, seg_piece, vertex_piece, bank_piece, bank_class


@njit
def count_components(w, tri_edge, tri_sign):
    """Number of components of the normal multicurve with weights ``w``."""
    c, ok = corner_counts(w, tri_edge)
    if not ok:
        return -1
    offs, arc_meta, arc_x, arc_low, cross_end = build_arcs(w, tri_edge, tri_sign, c)
    n_comp, comp = trace_arcs(arc_x, cross_end)
    return n_comp


@njit
def disjoint_batch(coords, pairs, tri_edge, tri_sign):
    """For each index pair, whether the two curves have disjoint representatives.

    The sum of the coordinates is traced; the curves are disjoint exactly
    when it splits into two components with the original coordinates.
    """
    m = pairs.shape[0]
    E = coords.shape[1]
    out = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        a = coords[pairs[i, 0]]
        b = coords[pairs[i, 1]]
        w = a + b
        c, ok = corner_counts(w, tri_edge)
        if not ok:
            continue
        offs, arc_meta, arc_x, arc_low, cross_end = build_arcs(w, tri_edge, tri_sign, c)
        n_comp, comp = trace_arcs(arc_x, cross_end)
        if n_comp != 2:
            continue
        cc = component_coords(w, offs, arc_x, comp, n_comp)
        same0 = True
        same1 = True
        for e in range(E):
            if cc[0, e] != a[e] or cc[1, e] != b[e]:
                same0 = False
            if cc[0, e] != b[e] or cc[1, e] != a[e]:
                same1 = False
        out[i] = same0 or same1
    return out


@njit
def enumerate_essential(W, order, tri_edge, tri_sign, tri_vert, n_vertices, tri_ready, vert_ready):
    """All connected, non-peripheral normal curves with every weight at most ``W``.

    ``order`` is the edge assignment order; ``tri_ready[t]`` / ``vert_ready[v]``
    give the depth at which triangle ``t`` / all corners at vertex ``v`` are
    fully determined, so admissibility and the no-linking condition prune
    early.  A multicurve has a component linking puncture ``v`` exactly when
    every corner at ``v`` carries an arc.
    """
    E = order.shape[0]
    T = tri_edge.shape[0]
    cap = 1024
    buf = np.zeros((cap, E), dtype=np.int64)
    n_found = 0
    w = np.zeros(E, dtype=np.int64)
    if E == 0 or W <= 0:
        return buf[:0]
    i = 0
    w[order[0]] = -1
    while i >= 0:
        e = order[i]
        w[e] += 1
        if w[e] > W:
            w[e] = 0
            i -= 1
            continue
        good = True
        for t in range(T):
            if tri_ready[t] != i:
                continue
            for j in range(3):
                s = w[tri_edge[t, (j + 2) % 3]] + w[tri_edge[t, j]] - w[tri_edge[t, (j + 1) % 3]]
                if s < 0 or s % 2 != 0:
                    good = False
                    break
            if not good:
                break
        if good:
            for v in range(n_vertices):
                if vert_ready[v] != i:
                    continue
                has_zero = False
                for t in range(T):
                    for j in range(3):
                        if tri_vert[t, j] == v:
                            s = w[tri_edge[t, (j + 2) % 3]] + w[tri_edge[t, j]] - w[tri_edge[t, (j + 1) % 3]]
                            if s == 0:
                                has_zero = True
                if not has_zero:
                    good = False
                    break
        if not good:
            continue
        if i < E - 1:
            i += 1
            w[order[i]] = -1
            continue
        total = 0
        for k in range(E):
            total += w[k]
        if total == 0:
            continue
        if count_components(w, tri_edge, tri_sign) != 1:
            continue
        if n_found == cap:
            nb = np.zeros((2 * cap, E), dtype=np.int64)
            nb[:cap] = buf
            buf = nb
            cap *= 2
        buf[n_found] = w
        n_found += 1
    return buf[:n_found].copy()
