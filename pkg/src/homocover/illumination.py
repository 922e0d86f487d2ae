"""Illumination of boundary points and antipodality tests.

The least number of directions illuminating every extreme point of a convex
body equals the least number of smaller homothets covering it, so the
direction sets found here give upper bounds on that number.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import setcover
from .config import TAU
from .errors import AntipodalPairError, GeometryError, NotOnBoundaryError
from .geometry import ConvexBody, interior_point, longest_chord
from .smalllp import LinearProgram, solve

__all__ = [
    "IlluminationWitness",
    "DirectionSet",
    "illuminates",
    "antipodal",
    "pairwise_antipodal",
    "common_illumination_direction",
    "illumination_number_upper",
]


@dataclass(frozen=True, eq=False)
class IlluminationWitness:
    direction: np.ndarray
    step: float


@dataclass(eq=False)
class DirectionSet:
    directions: list
    coverage: dict = field(default_factory=dict)
    exact: bool = False
    pool_size: int = 0

    def __len__(self):
        return len(self.directions)


def illuminates(K: ConvexBody, x, u) -> Optional[IlluminationWitness]:
    """Witness that ``x + step*u`` is in the relative interior, or None."""
    u = np.asarray(u, dtype=float)
    nu = np.linalg.norm(u)
    if u.shape != (K.ambient_dim,) or nu == 0.0:
        raise GeometryError("direction must be a nonzero ambient vector")
    if K.affine_dim == 0:
        raise NotOnBoundaryError("a point has empty relative boundary")
    tol = K.tol
    _check_boundary(K, x, tol)
    y = K.to_local(x)[0]
    slack = K.local_offsets - K.local_normals @ y
    w = u @ K.basis
    if np.linalg.norm(u - w @ K.basis.T) > TAU * nu:
        return None
    rate = K.local_normals @ w
    active = slack <= tol
    if np.any(rate[active] >= -TAU * nu):
        return None
    grow = ~active & (rate > 0)
    if not np.any(grow):
        raise GeometryError("unbounded ray in a bounded body")
    step = float(np.min(slack[grow] / rate[grow]))
    return IlluminationWitness(direction=u, step=0.5 * step)


def _check_boundary(K, p, tol):
    y, off = K.to_local(p)
    slack = K.local_offsets - K.local_normals @ y
    if off > tol or slack.min() < -tol or slack.min() > tol:
        raise NotOnBoundaryError("point is not on the relative boundary")


def _index_in(X, a, tol):
    d = np.linalg.norm(X - a, axis=1)
    return int(np.argmin(d)) if d.min() <= tol else -1


def antipodal(X, a, b, tol: float = TAU) -> bool:
    """True iff distinct parallel hyperplanes through a and b enclose X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if _index_in(X, a, tol) < 0 or _index_in(X, b, tol) < 0:
        raise GeometryError("a and b must belong to X")
    n = X.shape[1]
    A = np.vstack([X - a, b - X])
    out = solve(LinearProgram.from_arrays(a - b, A, np.zeros(len(A)), bounds=[(-1.0, 1.0)] * n))
    if not out.optimal:
        raise GeometryError(f"antipodality LP ended {out.status.value}")
    scale = max(1.0, float(np.abs(X).max()))
    return out.objective_value > tol * scale


def pairwise_antipodal(X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if len(X) < 2:
        raise GeometryError("need at least two points")
    R = np.zeros((len(X), len(X)), dtype=bool)
    for i, j in itertools.combinations(range(len(X)), 2):
        R[i, j] = R[j, i] = antipodal(X, X[i], X[j])
    return R


def common_illumination_direction(K: ConvexBody, x, y) -> IlluminationWitness:
    """A single direction illuminating both boundary points x and y.

    Uses the longest chord [u, v] of K parallel to x - y: shrinking it
    toward an interior point c until it has the length of [x, y] gives
    interior points s, t with s - t = x - y, and d = (s + t)/2 - (x + y)/2
    carries x to s and y to t.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c = interior_point(K)
    tol = K.tol
    if np.linalg.norm(x - y) <= tol:
        d = c - x
        w = illuminates(K, x, d)
        if w is None:
            raise GeometryError("interior direction failed to illuminate")
        return w
    for p in (x, y):
        _check_boundary(K, p, tol)
    X = np.vstack([K.vertices, x, y])
    if antipodal(X, x, y):
        raise AntipodalPairError("x and y are antipodal")
    chord = longest_chord(K, x - y)
    ratio = np.linalg.norm(x - y) / chord.length
    lam = 1.0 - ratio
    if lam <= TAU:
        raise AntipodalPairError("[x, y] is an affine diameter")
    s = lam * c + (1 - lam) * chord.u
    t = lam * c + (1 - lam) * chord.v
    d = (s + t) / 2 - (x + y) / 2
    wx = illuminates(K, x, d)
    wy = illuminates(K, y, d)
    if wx is None or wy is None:
        raise GeometryError("constructed direction does not illuminate both points")
    return IlluminationWitness(direction=d, step=min(wx.step, wy.step))


def _direction_pool(K):
    c = interior_point(K)
    V = K.vertices
    pool = [c - v for v in V]
    anti = pairwise_antipodal(V)
    for i, j in itertools.combinations(range(len(V)), 2):
        if not anti[i, j]:
            pool.append(common_illumination_direction(K, V[i], V[j]).direction)
    if K.full_dimensional:
        pool.extend(-n for n in K.normals)
    return pool


def illumination_number_upper(K: ConvexBody, exact_threshold: int = 24) -> DirectionSet:
    """A small set of directions illuminating every vertex of K.

    Candidates: vertex-to-interior directions, one common direction for each
    non-antipodal vertex pair, and the inner facet normals.  Greedy set cover
    always runs; the exact branch and bound runs when K has at most
    ``exact_threshold`` vertices.
    """
    if not K.full_dimensional:
        raise GeometryError("illumination search needs a full-dimensional body")
    V = K.vertices
    pool = _direction_pool(K)
    masks = []
    for d in pool:
        mask = 0
        for i, v in enumerate(V):
            if illuminates(K, v, d) is not None:
                mask |= 1 << i
        masks.append(mask)
    universe = (1 << len(V)) - 1
    covered = 0
    for m_ in masks:
        covered |= m_
    if covered != universe:
        raise GeometryError("a vertex is illuminated by no candidate direction")
    run_exact = len(V) <= exact_threshold
    chosen = setcover.exact(masks, universe) if run_exact else setcover.greedy(masks, universe)
    coverage = {}
    for i in range(len(V)):
        for slot, j in enumerate(chosen):
            if masks[j] >> i & 1:
                coverage[i] = slot
                break
    return DirectionSet([pool[j] for j in chosen], coverage, exact=run_exact, pool_size=len(pool))
