"""Convex polytopes in the plane and in space.

A :class:`ConvexBody` keeps its vertex list together with an orthonormal
frame of its affine hull and a facet description in that frame, so bodies
with empty interior (points, segments, polygons in space) are handled by
the same code as full-dimensional ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import hull as _hull
from .config import TAU, scaled
from .errors import DegenerateError, GeometryError, NormalizationError
from .smalllp import LinearProgram, solve

__all__ = [
    "ConvexBody",
    "AffineChord",
    "SubdivisionCell",
    "convex_hull",
    "contains",
    "gauge",
    "support",
    "interior_point",
    "longest_chord",
    "subdivide",
    "triangulate",
]


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """A compact convex polytope.

    ``local_normals``/``local_offsets`` describe the body inside its affine
    hull, in the coordinates ``y`` of ``x = origin + basis @ y``.  The
    ambient H-representation (``normals``/``offsets``) exists only for
    full-dimensional bodies, where the frame is the identity.
    """

    vertices: np.ndarray
    ambient_dim: int
    affine_dim: int
    origin: np.ndarray
    basis: np.ndarray
    local_vertices: np.ndarray
    local_normals: np.ndarray
    local_offsets: np.ndarray
    faces: tuple = field(default=())

    @property
    def full_dimensional(self):
        return self.affine_dim == self.ambient_dim

    @property
    def normals(self) -> Optional[np.ndarray]:
        return self.local_normals if self.full_dimensional else None

    @property
    def offsets(self) -> Optional[np.ndarray]:
        return self.local_offsets if self.full_dimensional else None

    @property
    def facets(self):
        if not self.full_dimensional:
            return []
        return list(zip(self.local_normals, self.local_offsets))

    @cached_property
    def diameter(self):
        V = self.vertices
        if len(V) < 2:
            return 0.0
        D = V[:, None, :] - V[None, :, :]
        return float(np.sqrt((D**2).sum(-1)).max())

    @property
    def tol(self):
        return scaled(TAU, self.diameter)

    def to_local(self, x):
        """Local coordinates of ``x`` and its distance from the affine hull."""
        x = np.asarray(x, dtype=float)
        d = x - self.origin
        y = d @ self.basis
        off = d - y @ self.basis.T
        return y, float(np.linalg.norm(off, axis=-1).max(initial=0.0))

    def to_ambient(self, y):
        return self.origin + np.asarray(y, dtype=float) @ self.basis.T

    def translate(self, t):
        t = np.asarray(t, dtype=float)
        return convex_hull(self.vertices + t, self.ambient_dim)

    def __repr__(self):
        return (
            f"ConvexBody(n={self.ambient_dim}, dim={self.affine_dim}, "
            f"vertices={len(self.vertices)}, facets={len(self.local_offsets)})"
        )


@dataclass(frozen=True)
class AffineChord:
    u: np.ndarray
    v: np.ndarray
    length: float


@dataclass(frozen=True, eq=False)
class SubdivisionCell:
    vertices: np.ndarray
    diameter: float

    @classmethod
    def of(cls, vertices):
        V = np.asarray(vertices, dtype=float)
        return cls(V, _diameter(V))


def _diameter(V):
    D = V[:, None, :] - V[None, :, :]
    return float(np.sqrt((D**2).sum(-1)).max())


def _as_points(points, n=None):
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        raise GeometryError("empty point set")
    if P.ndim == 1:
        P = P[None, :]
    if P.ndim != 2:
        raise GeometryError("points must form a 2-d array")
    if n is not None and P.shape[1] != n:
        raise GeometryError(f"points have dimension {P.shape[1]}, expected {n}")
    if P.shape[1] not in (2, 3):
        raise GeometryError("only dimensions 2 and 3 are supported")
    if not np.all(np.isfinite(P)):
        raise GeometryError("non-finite coordinates")
    return P


def convex_hull(points, n: Optional[int] = None) -> ConvexBody:
    """Build the minimal vertex and facet description of ``conv(points)``."""
    try:
        P = _as_points(points, n)
    except ValueError as exc:
        if isinstance(exc, GeometryError):
            raise
        raise GeometryError("points have inconsistent dimensions") from exc
    n = P.shape[1]
    extent = float(np.ptp(P, axis=0).max()) if len(P) > 1 else 0.0
    tol = scaled(TAU, extent)
    P = P[_hull.dedupe(P, tol)]

    origin, basis = _hull.affine_frame(P, tol)
    k = basis.shape[1]
    if k == n:
        origin, basis = np.zeros(n), np.eye(n)
    L = (P - origin) @ basis

    if k == 0:
        verts, normals, offsets, faces = [0], np.zeros((0, 0)), np.zeros(0), []
    elif k == 1:
        verts, normals, offsets, faces = _hull.hull_1d(L, tol)
    elif k == 2:
        verts, normals, offsets, faces = _hull.hull_2d(L, tol)
    else:
        try:
            verts, normals, offsets, faces = _hull.hull_3d(L, tol)
        except GeometryError:
            # flat to within the hull tolerance: snap onto the best plane
            k = 2
            origin, basis = _hull.affine_frame(P, tol, max_dim=k)
            L = (P - origin) @ basis
            P = origin + L @ basis.T
            verts, normals, offsets, faces = _hull.hull_2d(L, tol)

    return ConvexBody(
        vertices=P[verts].copy(),
        ambient_dim=n,
        affine_dim=k,
        origin=origin,
        basis=basis,
        local_vertices=L[verts].copy(),
        local_normals=np.asarray(normals, dtype=float).reshape(len(offsets), k),
        local_offsets=np.asarray(offsets, dtype=float),
        faces=tuple(tuple(f) for f in faces),
    )


def _local_point(K, x, tol):
    y, off = K.to_local(x)
    if off > tol:
        raise GeometryError(f"point lies {off:.3g} off the affine hull of the body")
    return y


def contains(K: ConvexBody, x, tol: float = TAU) -> bool:
    """Closed membership test; lower-dimensional bodies test intrinsically."""
    x = np.asarray(x, dtype=float)
    if x.shape != (K.ambient_dim,):
        raise GeometryError("point dimension mismatch")
    y = _local_point(K, x, tol)
    if K.affine_dim == 0:
        return True
    return bool(np.all(K.local_normals @ y <= K.local_offsets + tol))


def gauge(K: ConvexBody, v) -> float:
    """Minkowski functional ``min{t >= 0 : v in tK}`` (origin interior to K)."""
    if K.affine_dim == 0:
        raise NormalizationError("a point has no interior")
    tol = K.tol
    y0, off = K.to_local(np.zeros(K.ambient_dim))
    if off > tol:
        raise NormalizationError("origin is not in the affine hull of the body")
    b = K.local_offsets - K.local_normals @ y0
    if b.min() <= tol:
        raise NormalizationError("origin is not interior to the body")
    v = np.asarray(v, dtype=float)
    w = v @ K.basis
    if np.linalg.norm(v - w @ K.basis.T) > tol:
        raise GeometryError("vector is not parallel to the affine hull of the body")
    return max(0.0, float(np.max(K.local_normals @ w / b)))


def support(K: ConvexBody, u):
    """``(max <u, vertex>, vertices attaining it)``."""
    u = np.asarray(u, dtype=float)
    if u.shape != (K.ambient_dim,):
        raise GeometryError("direction dimension mismatch")
    nu = np.linalg.norm(u)
    if nu == 0.0:
        raise GeometryError("zero direction")
    vals = K.vertices @ u
    top = vals.max()
    face = K.vertices[vals >= top - K.tol * nu]
    return float(top), face


def interior_point(K: ConvexBody) -> np.ndarray:
    return K.vertices.mean(axis=0)


def longest_chord(K: ConvexBody, w) -> AffineChord:
    """Longest chord ``[v, u]`` of K with ``u - v`` a nonnegative multiple of ``w``.

    Solved as the LP ``max t`` over ``p, p + t w in K``; ties go to the
    lexicographically smallest ``u``.
    """
    w = np.asarray(w, dtype=float)
    nw = np.linalg.norm(w)
    if w.shape != (K.ambient_dim,) or nw == 0.0:
        raise GeometryError("chord direction must be a nonzero ambient vector")
    if K.affine_dim == 0:
        raise DegenerateError("a point has no chords")
    wl = (w / nw) @ K.basis
    if np.linalg.norm(w / nw - wl @ K.basis.T) > 1e-9:
        raise DegenerateError("direction is not parallel to the affine hull of the body")
    N, b = K.local_normals, K.local_offsets
    k = K.affine_dim
    Nw = N @ wl
    A = np.vstack([np.column_stack([N, np.zeros(len(b))]), np.column_stack([N, Nw])])
    rhs = np.concatenate([b, b])
    bounds = [(None, None)] * k + [(0.0, None)]
    c = np.zeros(k + 1)
    c[-1] = 1.0
    out = solve(LinearProgram.from_arrays(c, A, rhs, bounds=bounds))
    if not out.optimal:
        raise GeometryError(f"chord LP ended {out.status.value}")
    t_star = out.objective_value

    # lexicographic tie-break on the ambient coordinates of u = p + t w
    sol = out.solution
    slack = 1e-12 * max(1.0, K.diameter)
    A2 = np.vstack([A, -c])
    rhs2 = np.concatenate([rhs, [-t_star]])
    for j in range(K.ambient_dim):
        row = np.concatenate([K.basis[j], [K.basis[j] @ wl]])
        res = solve(LinearProgram.from_arrays(-row, A2, rhs2, bounds=bounds))
        if not res.optimal and j == 0:
            rhs2[-1] = -(t_star - slack)
            res = solve(LinearProgram.from_arrays(-row, A2, rhs2, bounds=bounds))
        if not res.optimal:
            break
        sol = res.solution
        A2 = np.vstack([A2, row])
        rhs2 = np.concatenate([rhs2, [row @ sol + slack]])
    p, t = sol[:k], sol[k]
    v = K.to_ambient(p)
    u = K.to_ambient(p + t * wl)
    return AffineChord(u=u, v=v, length=float(np.linalg.norm(u - v)))


def _bisect(V):
    """Longest-edge bisection of a simplex given as a (k+1, d) array."""
    best, pair = -1.0, (0, 1)
    for i, j in itertools.combinations(range(len(V)), 2):
        d = float(((V[i] - V[j]) ** 2).sum())
        if d > best * (1 + 1e-12):
            best, pair = d, (i, j)
    i, j = pair
    mid = 0.5 * (V[i] + V[j])
    a = V.copy()
    a[i] = mid
    b = V.copy()
    b[j] = mid
    return a, b


def simplex_volume(V):
    V = np.asarray(V, dtype=float)
    E = V[1:] - V[0]
    k = len(E)
    if k == 0:
        return 0.0
    G = E @ E.T
    return float(np.sqrt(max(np.linalg.det(G), 0.0))) / float(np.prod(np.arange(1, k + 1)))


def subdivide(cell: SubdivisionCell) -> list:
    """Split a simplex in two at the midpoint of its longest edge."""
    V = np.asarray(cell.vertices, dtype=float)
    if len(V) < 2 or simplex_volume(V) <= 1e-15 * max(cell.diameter, 1e-300) ** (len(V) - 1):
        raise DegenerateError("cannot subdivide a degenerate simplex")
    return [SubdivisionCell.of(c) for c in _bisect(V)]


def triangulate(K: ConvexBody) -> np.ndarray:
    """Simplices (in local coordinates) partitioning K; shape (T, k+1, k)."""
    L, k = K.local_vertices, K.affine_dim
    if k == 0:
        return np.zeros((1, 1, 0))
    if k == 1:
        return L[None, :, :]
    if k == 2:
        return np.array([[L[0], L[i], L[i + 1]] for i in range(1, len(L) - 1)])
    cells = []
    for face in K.faces:
        if 0 in face:
            continue
        for i in range(1, len(face) - 1):
            cells.append([L[0], L[face[0]], L[face[i]], L[face[i + 1]]])
    return np.array(cells)


def sample_uniform(K: ConvexBody, count: int, rng) -> np.ndarray:
    """Uniform random points of K in local coordinates."""
    S = triangulate(K)
    k = K.affine_dim
    if k == 0:
        return np.zeros((count, 0))
    vols = np.array([simplex_volume(s) for s in S])
    idx = rng.choice(len(S), size=count, p=vols / vols.sum())
    w = rng.dirichlet(np.ones(k + 1), size=count)
    return np.einsum("ij,ijk->ik", w, S[idx])
