"""Covers of convex hulls assembled from covers of their parts.

If K = conv(K_1 ∪ ... ∪ K_p) and each part K_i is covered by m_i homothets
of ratio gamma_i, then K is covered by m_1 + ... + m_p homothets of ratio
max_i (q - 1 + gamma_i) / q with q = min(p, n + 1).  The centers are
explicit: shift so an interior point z of K is the origin, scale each part
center by 1/q, shift back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .covering import HomothetCover, verify_cover
from .errors import DegenerateError, GeometryError
from .geometry import ConvexBody, convex_hull, interior_point

__all__ = [
    "HullDecomposition",
    "BoundEntry",
    "BoundReport",
    "compose_cover",
    "composed_ratio",
    "segment_cover",
    "point_cover",
    "simplex_segment_decomposition",
    "simplex_vertex_cover",
    "theorem32_bound",
    "parallelepiped_check",
]


@dataclass(frozen=True, eq=False)
class HullDecomposition:
    """Parts ``(body, cover)`` whose convex hull is the body of interest."""

    parts: tuple

    def __post_init__(self):
        parts = tuple((body, cover) for body, cover in self.parts)
        if not parts:
            raise ValueError("a decomposition needs at least one part")
        dims = {body.ambient_dim for body, _ in parts} | {c.centers.shape[1] for _, c in parts}
        if len(dims) != 1:
            raise GeometryError(f"parts mix ambient dimensions {sorted(dims)}")
        object.__setattr__(self, "parts", parts)

    @property
    def ambient_dim(self):
        return self.parts[0][0].ambient_dim

    @property
    def p(self):
        return len(self.parts)

    @property
    def q(self):
        return min(self.p, self.ambient_dim + 1)

    def hull(self) -> ConvexBody:
        return convex_hull(np.vstack([body.vertices for body, _ in self.parts]), self.ambient_dim)

    def check_parts(self, eps=None):
        """Verify every part cover against its own part; returns a list of bools."""
        ok = []
        for body, cover in self.parts:
            if body.affine_dim == 0:
                ok.append(bool(np.any(np.linalg.norm(cover.centers + cover.gamma * body.vertices[0] - body.vertices[0], axis=1) <= body.tol)))
            else:
                ok.append(verify_cover(body, cover, eps).covered)
        return ok


def composed_ratio(gammas, n: int) -> float:
    p = len(gammas)
    q = min(p, n + 1)
    return max((q - 1 + g) / q for g in gammas)


def compose_cover(decomp: HullDecomposition, body_ref: str = "") -> HomothetCover:
    """Cover of conv(∪ K_i) built from the part covers."""
    K = decomp.hull()
    z = interior_point(K)
    q = decomp.q
    gamma = composed_ratio([c.gamma for _, c in decomp.parts], decomp.ambient_dim)
    centers = []
    for _, cover in decomp.parts:
        shifted = cover.centers - (1.0 - cover.gamma) * z
        centers.append(shifted / q + (1.0 - gamma) * z)
    return HomothetCover(gamma, np.vstack(centers), body_ref)


def segment_cover(s: ConvexBody, k: int) -> HomothetCover:
    """``k`` homothets of ratio 1/k tiling a segment."""
    if s.affine_dim != 1:
        raise DegenerateError("segment_cover needs a body of affine dimension 1")
    if k < 1:
        raise ValueError("k must be at least 1")
    a, b = s.vertices
    j = np.arange(k)[:, None]
    return HomothetCover(1.0 / k, a + j / k * (b - a) - a / k)


def point_cover(x) -> HomothetCover:
    """The zero-ratio cover of the single point ``x``."""
    return HomothetCover(0.0, np.asarray(x, dtype=float)[None, :])


def simplex_segment_decomposition(S: ConvexBody) -> HullDecomposition:
    """Pair the vertices of a simplex into segments, each cut in half.

    Vertices are paired in order (1,2), (3,4), ...; in even dimension the
    last vertex is left over as a point part.
    """
    n = S.affine_dim
    if n < 1 or len(S.vertices) != n + 1:
        raise DegenerateError("body is not a simplex")
    V = S.vertices
    parts = []
    for i in range(0, n, 2):
        seg = convex_hull(V[i : i + 2], S.ambient_dim)
        parts.append((seg, segment_cover(seg, 2)))
    if (n + 1) % 2:
        pt = convex_hull(V[-1:], S.ambient_dim)
        parts.append((pt, point_cover(V[-1])))
    return HullDecomposition(tuple(parts))


def simplex_vertex_cover(S: ConvexBody) -> HomothetCover:
    """The n + 1 homothets of ratio n/(n+1), one about each vertex."""
    n = S.affine_dim
    if n < 1 or len(S.vertices) != n + 1:
        raise DegenerateError("body is not a simplex")
    g = n / (n + 1)
    return HomothetCover(g, (1 - g) * S.vertices)


# -- three-dimensional case analysis --------------------------------------

# Planar constants from the literature, consumed as numbers only.
PLANAR_GAMMA_4 = math.sqrt(2) / 2
PLANAR_GAMMA_6 = math.sin(3 * math.pi / 10) ** 2
PLANAR_GAMMA_7 = 0.5
SIMPLEX3_GAMMA_5 = 9 / 13


@dataclass(frozen=True)
class BoundEntry:
    m: int
    gamma_bound: float
    note: str


@dataclass(frozen=True)
class BoundReport:
    case_label: str
    dims: tuple
    entries: tuple = field(default=())

    @property
    def m(self):
        return self.entries[0].m

    @property
    def gamma_bound(self):
        return self.entries[0].gamma_bound

    @property
    def notes(self):
        return [e.note for e in self.entries]


def theorem32_bound(L: ConvexBody, M: ConvexBody) -> BoundReport:
    """Covering-functional bounds for K = conv(L ∪ M) in space, L and M flat.

    The case is decided by the affine dimensions of L and M.  Where two
    (m, bound) pairs apply both are reported, the first being the m = 8 one
    when present.
    """
    for B in (L, M):
        if B.ambient_dim != 3:
            raise GeometryError("bounds apply to bodies in three-space")
        if B.affine_dim > 2:
            raise GeometryError("L and M must have empty interior")
    K = convex_hull(np.vstack([L.vertices, M.vertices]), 3)
    if K.affine_dim != 3:
        raise DegenerateError("conv(L ∪ M) is not three-dimensional")
    dims = tuple(sorted((L.affine_dim, M.affine_dim)))
    half_sqrt2 = (1 + PLANAR_GAMMA_4) / 2
    if dims == (0, 2):
        entries = (
            BoundEntry(8, 1 / (2 - PLANAR_GAMMA_7), "cone bound 1/(2 - Γ_7(M)) with planar Γ_7 ≤ 1/2"),
            BoundEntry(5, half_sqrt2, "two-part composition with planar Γ_4 ≤ √2/2"),
        )
        label = "Case1"
    elif dims == (1, 1):
        entries = (BoundEntry(5, SIMPLEX3_GAMMA_5, "K is a tetrahedron; Γ_5 = 9/13 (also bounds Γ_8)"),)
        label = "Case2"
    elif dims == (1, 2):
        entries = (
            BoundEntry(8, (1 + PLANAR_GAMMA_6) / 2, "two-part composition, Γ_2(segment) = 1/2, planar Γ_6 ≤ sin²(3π/10)"),
            BoundEntry(6, half_sqrt2, "two-part composition with planar Γ_4 ≤ √2/2"),
        )
        label = "Case3"
    elif dims == (2, 2):
        entries = (BoundEntry(8, half_sqrt2, "two-part composition with planar Γ_4 ≤ √2/2"),)
        label = "Case4"
    else:
        raise DegenerateError(f"no case for affine dimensions {dims}")
    return BoundReport(label, (L.affine_dim, M.affine_dim), entries)


def parallelepiped_check(K: ConvexBody, tol: float = None) -> bool:
    """True iff the vertices are z + {0,e1} + {0,e2} + {0,e3}, e_i independent."""
    if K.ambient_dim != 3 or K.affine_dim != 3 or len(K.vertices) != 8:
        return False
    tol = K.tol * 10 if tol is None else tol
    V = K.vertices
    z = V[0]
    E = V[1:] - z
    signs = np.array([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)], dtype=float)
    for i in range(7):
        for j in range(i + 1, 7):
            for k in range(j + 1, 7):
                B = E[[i, j, k]]
                if abs(np.linalg.det(B)) <= tol * max(1.0, K.diameter) ** 2:
                    continue
                corners = z + signs @ B
                D = np.linalg.norm(corners[:, None, :] - V[None, :, :], axis=2)
                if np.all(D.min(axis=1) <= tol) and np.all(D.min(axis=0) <= tol):
                    return True
    return False
