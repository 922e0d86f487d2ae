"""Convex hulls of small point sets in local (intrinsic) coordinates.

Dimension 1 is an interval, dimension 2 uses Andrew's monotone chain, and
dimension 3 is an incremental beneath-beyond hull whose coplanar triangles
are merged into polygonal facets afterwards.
"""
from __future__ import annotations

import itertools

import numpy as np

from .config import COPLANAR_TOL
from .errors import GeometryError


def affine_frame(P, tol, max_dim=None):
    """Return ``(origin, basis)`` of the affine hull of ``P``.

    ``basis`` has orthonormal columns; its width is the affine dimension,
    or at most ``max_dim`` (the best-fitting flat of that dimension).
    """
    c = P.mean(axis=0)
    Q = P - c
    if len(P) == 1:
        return c, np.zeros((P.shape[1], 0))
    _, _, Vt = np.linalg.svd(Q, full_matrices=False)
    keep = [v for v in Vt if np.abs(Q @ v).max() > tol]
    if max_dim is not None:
        keep = keep[:max_dim]
    if not keep:
        return c, np.zeros((P.shape[1], 0))
    return c, np.array(keep).T


def dedupe(P, tol):
    """Indices of the first occurrence of each point (within ``tol``)."""
    kept = []
    for i, p in enumerate(P):
        if kept and np.abs(P[kept] - p).max(axis=1).min() <= tol:
            continue
        kept.append(i)
    return np.array(kept, dtype=int)


def hull_1d(L, tol):
    """Local hull of collinear points: ``(vertex indices, normals, offsets, faces)``."""
    x = L[:, 0]
    lo, hi = int(np.argmin(x)), int(np.argmax(x))
    verts = [lo, hi]
    normals = np.array([[-1.0], [1.0]])
    offsets = np.array([-x[lo], x[hi]])
    return verts, normals, offsets, [(0,), (1,)]


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(L, tol):
    """Monotone chain; vertices come out counter-clockwise."""
    order = sorted(range(len(L)), key=lambda i: (L[i, 0], L[i, 1]))

    def half(seq):
        out = []
        for i in seq:
            while len(out) >= 2:
                o, a = L[out[-2]], L[out[-1]]
                base = np.hypot(*(L[i] - o))
                # pop right turns and (near-)collinear middle points
                if _cross2(o, a, L[i]) <= tol * max(base, 1e-300):
                    out.pop()
                else:
                    break
            out.append(i)
        return out

    lower = half(order)
    upper = half(order[::-1])
    verts = lower[:-1] + upper[:-1]
    V = L[verts]
    E = np.roll(V, -1, axis=0) - V
    normals = np.column_stack([E[:, 1], -E[:, 0]])
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    offsets = np.einsum("ij,ij->i", normals, V)
    k = len(verts)
    faces = [(i, (i + 1) % k) for i in range(k)]
    return verts, normals, offsets, faces


def _initial_tetrahedron(P, tol):
    i0 = int(np.lexsort(P.T[::-1])[0])
    i1 = int(np.argmax(np.linalg.norm(P - P[i0], axis=1)))
    d = P[i1] - P[i0]
    i2 = int(np.argmax(np.linalg.norm(np.cross(d, P - P[i0]), axis=1)))
    nrm = np.cross(d, P[i2] - P[i0])
    h = (P - P[i0]) @ nrm
    i3 = int(np.argmax(np.abs(h)))
    if abs(h[i3]) <= tol * np.linalg.norm(nrm):
        raise GeometryError("points do not span three dimensions")
    if h[i3] > 0:
        i1, i2 = i2, i1
    return i0, i1, i2, i3


def hull_3d(L, tol):
    """Spatial hull; returns ``(vertex indices, normals, offsets, faces)``.

    ``faces`` lists each merged facet as a tuple of positions into the
    returned vertex list, ordered counter-clockwise seen from outside.
    The incremental construction is tried first; when rounding defeats it
    (near-duplicate or nearly coplanar points) the facets are enumerated
    directly instead.
    """
    P = np.asarray(L, dtype=float)
    try:
        return _incremental(P, tol)
    except GeometryError:
        return _enumerate(P, tol)


def _incremental(P, tol):
    a, b, c, d = _initial_tetrahedron(P, tol)
    inside = P[[a, b, c, d]].mean(axis=0)

    faces = {}
    edge_face = {}
    next_id = [0]

    def plane(i, j, k):
        u, w = P[j] - P[i], P[k] - P[i]
        n = np.cross(u, w)
        ln = np.linalg.norm(n)
        if ln <= 1e-14 * np.linalg.norm(u) * np.linalg.norm(w):
            return None
        n = n / ln
        return n, float(n @ P[i])

    def add(i, j, k, pl):
        fid = next_id[0]
        next_id[0] += 1
        faces[fid] = (i, j, k, pl[0], pl[1])
        for e in ((i, j), (j, k), (k, i)):
            edge_face[e] = fid

    # (a, b, c) is oriented so that d lies on its negative side
    for tri in ((a, b, c), (a, d, b), (b, d, c), (c, d, a)):
        pl = plane(*tri)
        if pl is None or pl[0] @ inside > pl[1]:
            raise GeometryError("initial tetrahedron orientation failure")
        add(*tri, pl)

    rest = [i for i in range(len(P)) if i not in (a, b, c, d)]
    rest.sort(key=lambda i: -np.linalg.norm(P[i] - inside))
    for idx in rest:
        p = P[idx]
        visible = [f for f, (_, _, _, n, off) in faces.items() if n @ p - off > tol]
        if not visible:
            continue
        # neighbours that see the point by less than tol join the visible region,
        # otherwise the new cone would contain needle triangles
        vis = set(visible)
        stack = list(visible)
        while stack:
            i, j, k = faces[stack.pop()][:3]
            for e in ((i, j), (j, k), (k, i)):
                g = edge_face.get((e[1], e[0]))
                if g is not None and g not in vis and faces[g][3] @ p - faces[g][4] > 0.0:
                    vis.add(g)
                    stack.append(g)
        visible = list(vis)
        horizon = []
        for f in visible:
            i, j, k = faces[f][:3]
            for e in ((i, j), (j, k), (k, i)):
                if edge_face.get((e[1], e[0])) not in vis:
                    horizon.append(e)
        new = []
        for i, j in horizon:
            pl = plane(i, j, idx)
            if pl is None:
                break
            new.append((i, j, idx, pl))
        else:
            for f in visible:
                i, j, k = faces.pop(f)[:3]
                for e in ((i, j), (j, k), (k, i)):
                    if edge_face.get(e) == f:
                        del edge_face[e]
            for i, j, k, pl in new:
                add(i, j, k, pl)

    return _merge_facets(P, faces, tol)


def _merge_facets(P, faces, tol):
    # join triangles across shared edges when each apex lies on the other's plane
    keys = list(faces)
    pos = {f: a for a, f in enumerate(keys)}
    parent = list(range(len(keys)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edge = {}
    for f in keys:
        i, j, k = faces[f][:3]
        for e in ((i, j), (j, k), (k, i)):
            edge[e] = f
    for f in keys:
        i, j, k, n, off = faces[f]
        for e in ((i, j), (j, k), (k, i)):
            g = edge.get((e[1], e[0]))
            if g is None or pos[g] < pos[f]:
                continue
            gi, gj, gk, gn, goff = faces[g]
            if 1.0 - float(n @ gn) > COPLANAR_TOL:
                continue
            if all(abs(P[v] @ n - off) <= 10 * tol for v in (gi, gj, gk)) and all(
                abs(P[v] @ gn - goff) <= 10 * tol for v in (i, j, k)
            ):
                parent[find(pos[g])] = find(pos[f])

    groups = {}
    for f in keys:
        groups.setdefault(find(pos[f]), []).append(faces[f])
    normals, offsets, members = [], [], []
    for tris in groups.values():
        best = max(tris, key=lambda t: np.linalg.norm(np.cross(P[t[1]] - P[t[0]], P[t[2]] - P[t[0]])))
        normals.append(best[3])
        offsets.append(best[4])
        members.append(sorted({v for t in tris for v in t[:3]}))
    normals = np.array(normals)
    offsets = np.array(offsets)

    return _facets(P, normals, offsets, members, tol)


def _enumerate(P, tol):
    """Facets as the supporting planes through triples of points.

    Quartic in the number of points, so it only serves as the fallback.
    Triangles thinner than ``tol`` are skipped since their planes are not
    determined to working precision.
    """
    n = len(P)
    normals, offsets, members, areas = [], [], [], []
    seen = {}
    T = np.array(list(itertools.combinations(range(n), 3)))
    for chunk in np.array_split(T, max(1, len(T) // 4096)):
        u = P[chunk[:, 1]] - P[chunk[:, 0]]
        w = P[chunk[:, 2]] - P[chunk[:, 0]]
        N = np.cross(u, w)
        area = np.linalg.norm(N, axis=1)
        longest = np.maximum(np.linalg.norm(u, axis=1), np.linalg.norm(w, axis=1))
        ok = area > tol * np.maximum(longest, 1e-300)
        for t, nv, a in zip(chunk[ok], N[ok], area[ok]):
            nv = nv / a
            off = float(nv @ P[t[0]])
            s = P @ nv - off
            if s.max() <= 10 * tol:
                pass
            elif s.min() >= -10 * tol:
                nv, off, s = -nv, -off, -s
            else:
                continue
            key = tuple(np.flatnonzero(np.abs(s) <= 10 * tol))
            g = seen.get(key)
            if g is None:
                seen[key] = len(normals)
                normals.append(nv)
                offsets.append(off)
                members.append(list(key))
                areas.append(a)
            elif a > areas[g]:
                normals[g], offsets[g], areas[g] = nv, off, a
    if not normals:
        raise GeometryError("points do not span three dimensions")
    return _facets(P, np.array(normals), np.array(offsets), members, tol)


def _facets(P, normals, offsets, members, tol):
    """Validate planes and turn member points into facet polygons."""
    slack = P @ normals.T - offsets
    if slack.max() > 100 * tol:
        raise GeometryError(f"hull validation failed (excess {slack.max():.3g})")
    # make every plane supporting so that no input point sticks out
    offsets = np.maximum(offsets, (P @ normals.T).max(axis=0))
    # corners of each facet polygon in its own plane; collinear points drop out
    polys = []
    for g, n in enumerate(normals):
        idx = np.array(members[g])
        Q = P[idx]
        ctr = Q.mean(axis=0)
        e1 = Q[np.argmax(np.linalg.norm(Q - ctr, axis=1))] - ctr
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        local2 = np.column_stack([(Q - ctr) @ e1, (Q - ctr) @ e2])
        ring = hull_2d(local2, tol)[0]
        if len(ring) >= 3:
            polys.append((g, [int(idx[r]) for r in ring]))
    if len(polys) < 4:
        raise GeometryError("degenerate 3D hull")
    verts = sorted({v for _, ring in polys for v in ring})
    local = {v: a for a, v in enumerate(verts)}
    keep = [g for g, _ in polys]
    face_lists = [tuple(local[v] for v in ring) for _, ring in polys]
    return verts, normals[keep], offsets[keep], face_lists
