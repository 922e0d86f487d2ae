"""Homothetic covers: certified verification and ratio optimization.

A cover ``(gamma, centers)`` claims ``K ⊆ ∪ (x_i + gamma K)``.  The verifier
splits K into simplices and refines them until every cell sits inside a
single homothet (a proof, by convexity) or a point of K outside every
homothet turns up.  Cells are refined by cutting along homothet facet planes
first and by longest-edge bisection only when no plane separates them.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .config import EPS_FRACTION, OPT_TOL, TAU, scaled
from .errors import DegenerateError, GeometryError, NoSubunitCoverError
from .geometry import ConvexBody, _bisect, contains, gauge, interior_point, sample_uniform, triangulate
from .smalllp import LinearProgram, solve

__all__ = [
    "HomothetCover",
    "VerdictKind",
    "CoverVerdict",
    "verify_cover",
    "min_gamma_for_centers",
    "gamma_upper",
    "gamma_of_point",
    "identity_cover",
]


@dataclass(frozen=True, eq=False)
class HomothetCover:
    """Ratio and translation vectors of the homothets ``x_i + gamma K``.

    ``gamma`` may be 0 only for covers of a single point.
    """

    gamma: float
    centers: np.ndarray
    body_ref: str = ""

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.centers, dtype=float))
        if C.size == 0:
            raise ValueError("a cover needs at least one center")
        if not np.all(np.isfinite(C)):
            raise ValueError("non-finite center coordinates")
        g = float(self.gamma)
        if not np.isfinite(g) or g < 0:
            raise ValueError(f"invalid ratio {self.gamma!r}")
        object.__setattr__(self, "centers", C)
        object.__setattr__(self, "gamma", g)

    @property
    def m(self):
        return len(self.centers)

    def homothet(self, K: ConvexBody, i: int) -> np.ndarray:
        """Vertices of the ``i``-th homothet of K."""
        return self.centers[i] + self.gamma * K.vertices


def identity_cover(K: ConvexBody, m: int = 1, body_ref: str = "") -> HomothetCover:
    return HomothetCover(1.0, np.zeros((max(1, m), K.ambient_dim)), body_ref)


class VerdictKind(enum.Enum):
    COVERED = "Covered"
    UNCOVERED = "Uncovered"
    UNKNOWN = "Unknown"


@dataclass
class CoverVerdict:
    kind: VerdictKind
    witness: Optional[np.ndarray] = None
    resolution: float = 0.0
    cells_processed: int = 0
    attribution: tuple = field(default=())

    @property
    def covered(self):
        return self.kind is VerdictKind.COVERED


def _local_homothets(K, gamma, centers):
    """Facet offsets ``H`` (m, F) of the homothets inside K's affine hull.

    Homothets whose flat misses the affine hull of K are dropped; the
    returned index array maps rows of ``H`` back to cover indices.
    """
    C = np.atleast_2d(np.asarray(centers, dtype=float))
    if C.shape[1] != K.ambient_dim:
        raise GeometryError(f"centers have dimension {C.shape[1]}, body has {K.ambient_dim}")
    shifted = C - (1.0 - gamma) * K.origin
    local = shifted @ K.basis
    resid = np.linalg.norm(shifted - local @ K.basis.T, axis=1)
    keep = np.flatnonzero(resid <= K.tol)
    H = gamma * K.local_offsets[None, :] + local[keep] @ K.local_normals.T
    return H, keep


def _triangulate_convex(P, k, tol):
    """Simplices of a small convex point set (all points are its vertices)."""
    if k == 1:
        lo, hi = P[:, 0].min(), P[:, 0].max()
        return [np.array([[lo], [hi]])] if hi - lo > tol else []
    ctr = P.mean(axis=0)
    if k == 2:
        ang = np.arctan2(P[:, 1] - ctr[1], P[:, 0] - ctr[0])
        Q = P[np.argsort(ang)]
        out = []
        for i in range(1, len(Q) - 1):
            T = np.array([Q[0], Q[i], Q[i + 1]])
            if _thickness(T) > tol:
                out.append(T)
        return out
    if len(P) == 4:
        return [P] if _thickness(P) > tol else []
    # brute-force facets of a polytope with at most a handful of vertices
    tri = np.array(list(itertools.combinations(range(len(P)), 3)))
    nrm = np.cross(P[tri[:, 1]] - P[tri[:, 0]], P[tri[:, 2]] - P[tri[:, 0]])
    ln = np.linalg.norm(nrm, axis=1)
    ok = ln > 1e-300
    tri, nrm = tri[ok], nrm[ok] / ln[ok, None]
    off = np.einsum("ij,ij->i", nrm, P[tri[:, 0]])
    S = P @ nrm.T - off
    out, seen = [], set()
    for f in range(len(tri)):
        s = S[:, f]
        if s.max() <= tol:
            pass
        elif s.min() >= -tol:
            s = -s
        else:
            continue
        on = tuple(np.flatnonzero(np.abs(s) <= tol))
        if on in seen or 0 in on or len(on) < 3:
            seen.add(on)
            continue
        seen.add(on)
        F = P[list(on)]
        fc = F.mean(axis=0)
        e1 = F[0] - fc
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(nrm[f], e1)
        order = np.argsort(np.arctan2((F - fc) @ e2, (F - fc) @ e1))
        F = F[order]
        for i in range(1, len(F) - 1):
            T = np.array([P[0], F[0], F[i], F[i + 1]])
            if _thickness(T) > tol:
                out.append(T)
    return out


def _thickness(T):
    """k-volume of a simplex divided by its diameter^(k-1) (times k!)."""
    E = T[1:] - T[0]
    k = len(E)
    det = abs(np.linalg.det(E)) if E.shape[0] == E.shape[1] else 0.0
    D = T[:, None, :] - T[None, :, :]
    diam = np.sqrt((D**2).sum(-1)).max()
    return det / diam ** (k - 1) if diam > 0 else 0.0


def _split(V, normal, h, tol):
    d = V @ normal - h
    neg, pos = d < -tol, d > tol
    zero = ~(neg | pos)
    inter = []
    for i in np.flatnonzero(neg):
        for j in np.flatnonzero(pos):
            t = d[i] / (d[i] - d[j])
            inter.append(V[i] + t * (V[j] - V[i]))
    k = V.shape[1]
    inter = np.array(inter).reshape(-1, k)
    lower = np.vstack([V[neg | zero], inter])
    upper = np.vstack([V[pos | zero], inter])
    return _triangulate_convex(lower, k, tol) + _triangulate_convex(upper, k, tol)


def _witness_candidates(V):
    r = len(V)
    mids = [(V[i] + V[j]) / 2 for i, j in itertools.combinations(range(r), 2)]
    ctr = V.mean(axis=0)
    return np.vstack([ctr[None, :], V, np.array(mids).reshape(-1, V.shape[1]), (V + ctr) / 2])


def verify_cover(
    K: ConvexBody,
    cover: HomothetCover,
    eps: Optional[float] = None,
    tol: Optional[float] = None,
    max_cells: int = 2_000_000,
) -> CoverVerdict:
    """Decide whether ``cover`` covers ``K``.

    Returns COVERED only with a complete certificate, UNCOVERED with a
    witness point of K lying outside every homothet by more than ``tol``,
    and UNKNOWN when undecided cells shrank below ``eps``.
    """
    gamma = cover.gamma
    if gamma <= 0:
        raise ValueError("cover ratio must be positive")
    if cover.centers.shape[1] != K.ambient_dim:
        raise GeometryError("center dimension does not match the body")
    tol = K.tol if tol is None else tol
    if eps is None:
        eps = EPS_FRACTION * max(K.diameter, 1e-12)
    k = K.affine_dim
    H, keep = _local_homothets(K, gamma, cover.centers)
    counts = np.zeros(cover.m, dtype=int)

    if k == 0:
        if len(keep):
            counts[keep[0]] = 1
            return CoverVerdict(VerdictKind.COVERED, cells_processed=1, attribution=tuple(counts))
        return CoverVerdict(VerdictKind.UNCOVERED, witness=K.vertices[0].copy(), cells_processed=1)

    N = K.local_normals
    stack = list(triangulate(K))
    processed = 0
    unknown = 0
    resolution = np.inf
    while stack:
        V = stack.pop()
        processed += 1
        if processed > max_cells:
            unknown += 1
            break
        inside, ci, cf = kernels.classify_cell(V, N, H, tol)
        if inside >= 0:
            counts[keep[inside]] += 1
            continue
        if ci >= 0:
            stack.extend(_split(V, N[cf], H[ci, cf], tol))
            continue
        cand = _witness_candidates(V)
        viol = kernels.min_violation(cand, N, H)
        j = int(np.argmax(viol))
        if viol[j] > tol:
            w = K.to_ambient(cand[j])
            if contains(K, w, tol):
                return CoverVerdict(VerdictKind.UNCOVERED, witness=w, cells_processed=processed)
        D = V[:, None, :] - V[None, :, :]
        diam = float(np.sqrt((D**2).sum(-1)).max())
        if diam < eps:
            unknown += 1
            resolution = min(resolution, diam)
            continue
        stack.extend(_bisect(V))

    if unknown:
        res = resolution if np.isfinite(resolution) else eps
        return CoverVerdict(VerdictKind.UNKNOWN, resolution=res, cells_processed=processed)
    return CoverVerdict(VerdictKind.COVERED, cells_processed=processed, attribution=tuple(counts))


def _bisect_ratio(K, covered_at, tol, lo=0.0, hi=1.0):
    if not covered_at(hi):
        raise NoSubunitCoverError(f"not covered at ratio {hi}", gamma_lower=hi)
    if lo > 0 and covered_at(lo):
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if covered_at(mid):
            hi = mid
        else:
            lo = mid
    return hi


def min_gamma_for_centers(
    K: ConvexBody, centers, tol: float = OPT_TOL, eps: Optional[float] = None, lo: float = 0.0
) -> float:
    """Smallest ratio (within ``tol``) at which the fixed translations cover K.

    Raises :class:`NoSubunitCoverError` when a ratio of 1 does not suffice.
    """
    C = np.atleast_2d(np.asarray(centers, dtype=float))
    if C.size == 0:
        raise ValueError("no centers")

    def covered_at(g):
        return verify_cover(K, HomothetCover(g, C), eps).covered

    return _bisect_ratio(K, covered_at, tol, lo=lo)


def inflate(K: ConvexBody, cover: HomothetCover, delta: float) -> HomothetCover:
    """Change the ratio by ``delta`` keeping the image of z fixed.

    z is the interior point of K.  Holding ``x + gamma z`` fixed makes the
    homothets nested in gamma, so a positive ``delta`` never uncovers a
    covered point (moving the ratio with x held fixed can, when 0 is not
    in K).
    """
    z = interior_point(K)
    return HomothetCover(cover.gamma + delta, cover.centers - delta * z, cover.body_ref)


def gamma_of_point(K: ConvexBody, center, x) -> float:
    """Least ``gamma >= 0`` with ``x in center + gamma K``; needs 0 interior to K."""
    return gauge(K, np.asarray(x, dtype=float) - np.asarray(center, dtype=float))


# -- optimizer -----------------------------------------------------------


class _Frame:
    """K in local coordinates, translated so its vertex average is the origin."""

    def __init__(self, K):
        self.K = K
        self.z = K.local_vertices.mean(axis=0)
        self.N = K.local_normals
        self.b = K.local_offsets - self.N @ self.z
        self.V = K.local_vertices - self.z

    def translations(self, C, gamma):
        """Ambient translation vectors for homothety centers ``C`` at ``gamma``."""
        t = C + (1.0 - gamma) * self.z
        return (1.0 - gamma) * self.K.origin + t @ self.K.basis.T

    def centers_of(self, cover):
        """Inverse of :meth:`translations`."""
        g = cover.gamma
        t = (cover.centers - (1.0 - g) * self.K.origin) @ self.K.basis
        return t - (1.0 - g) * self.z

    def ratio(self, S, C):
        return kernels.nearest_homothet(S, self.N, self.b, C)


def _one_center(N, b, h):
    """Center and ratio of the smallest homothet holding a point set.

    ``h[f]`` is the largest value of ``N_f . p`` over the set.
    """
    k = N.shape[1]
    A = np.column_stack([-N, -b])
    c = np.zeros(k + 1)
    c[-1] = -1.0
    out = solve(LinearProgram.from_arrays(c, A, -h))
    if not out.optimal:
        raise RuntimeError(f"center LP ended {out.status.value}")
    return out.solution[:k], out.solution[k]


def _lloyd(frame, S, C, sweeps):
    C = C.copy()
    ratio, idx = frame.ratio(S, C)
    g = float(ratio.max())
    used = 0
    while used < sweeps:
        used += 1
        new = C.copy()
        for i in range(len(C)):
            A = S[idx == i]
            if len(A) == 0:
                new[i] = S[int(np.argmax(ratio))]
                continue
            new[i], _ = _one_center(frame.N, frame.b, (A @ frame.N.T).max(axis=0))
        r2, idx2 = frame.ratio(S, new)
        g2 = float(r2.max())
        if g2 >= g - 1e-12:
            break
        C, ratio, idx, g = new, r2, idx2, g2
    return C, g, used


def _farthest_first(frame, S, m, rng):
    C = [S[rng.integers(len(S))]]
    for _ in range(m - 1):
        r, _ = frame.ratio(S, np.array(C))
        C.append(S[int(np.argmax(r))])
    return np.array(C)


def _structured(frame, K):
    """Edge subdivision points and facet centroids, where covers are tight."""
    V, N, b = frame.V, frame.N, frame.b
    k = V.shape[1]
    on = np.abs(V @ N.T - b) <= K.tol
    pts = [np.zeros((1, k))]
    t = np.arange(1, 8)[:, None] / 8.0
    for i, j in itertools.combinations(range(len(V)), 2):
        if (on[i] & on[j]).sum() >= k - 1:
            pts.append(V[i] + t * (V[j] - V[i]))
    if k == 3:
        pts.extend(V[on[:, f]].mean(axis=0)[None, :] for f in range(len(N)))
    return np.vstack(pts)


def _sample(frame, K, rng):
    k = K.affine_dim
    count = {1: 64, 2: 400, 3: 1500}[k]
    pts = sample_uniform(K, count, rng) - frame.z
    return np.vstack([frame.V, _structured(frame, K), pts])


def gamma_upper(
    K: ConvexBody,
    m: int,
    budget: int = 256,
    seed: int = 0,
    warm_start: Optional[HomothetCover] = None,
    tol: float = OPT_TOL,
    eps: Optional[float] = None,
    sweeps_per_restart: int = 16,
    refine_rounds: int = 12,
):
    """Search for a cover of K by ``m`` homothets with a small ratio.

    Multi-start local search: centers start at farthest-first sample points
    (or at ``warm_start``), then alternate between assigning sample points to
    their nearest homothet and re-centering each homothet on its points by
    LP.  Verifier witnesses are fed back into the sample.  ``budget`` is the
    total number of re-centering sweeps.  The result is an upper bound only;
    if nothing below 1 is found the identity cover is returned.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if K.affine_dim == 0:
        raise DegenerateError("a point is covered by one homothet of any ratio")
    best_gamma, best_cover = 1.0, identity_cover(K, m)
    if m == 1:
        return best_gamma, best_cover

    rng = np.random.default_rng(seed)
    frame = _Frame(K)
    S = _sample(frame, K, rng)

    starts = []
    if warm_start is not None:
        C0 = frame.centers_of(warm_start)
        if len(C0) < m:
            C0 = np.vstack([C0, np.repeat(C0[:1], m - len(C0), axis=0)])
        starts.append(C0[:m])
        # the warm start itself is the incumbent when it is a valid cover
        g0 = float(warm_start.gamma)
        if g0 < best_gamma and verify_cover(K, HomothetCover(g0, frame.translations(C0[:m], g0)), eps).covered:
            best_gamma, best_cover = g0, HomothetCover(g0, frame.translations(C0[:m], g0))

    left = max(1, int(budget))
    restart = 0
    while left > 0:
        C0 = starts[restart] if restart < len(starts) else _farthest_first(frame, S, m, rng)
        restart += 1
        C, g, used = _lloyd(frame, S, C0, min(sweeps_per_restart, left))
        left -= max(used, 1)
        for _ in range(refine_rounds):
            if g >= best_gamma - tol:
                break
            probe = min(1.0, g + max(tol, 1e-4 * g))
            v = verify_cover(K, HomothetCover(probe, frame.translations(C, probe)), eps)
            if v.kind is not VerdictKind.UNCOVERED:
                break
            w = K.to_local(v.witness)[0] - frame.z
            S = np.vstack([S, w])
            C, g, used = _lloyd(frame, S, C, min(sweeps_per_restart, max(left, 1)))
            left -= max(used, 1)
        if g >= best_gamma - tol:
            continue

        def covered_at(x, C=C):
            return verify_cover(K, HomothetCover(x, frame.translations(C, x)), eps).covered

        try:
            found = _bisect_ratio(K, covered_at, tol, lo=g * (1 - 1e-12), hi=min(1.0, best_gamma))
        except NoSubunitCoverError:
            continue
        if found < best_gamma:
            best_gamma = found
            best_cover = HomothetCover(found, frame.translations(C, found))
    return best_gamma, best_cover
