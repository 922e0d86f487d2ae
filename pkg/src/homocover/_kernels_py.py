"""Reference numpy implementations of the verifier and optimizer kernels.

Homothets are given by a shared facet normal matrix ``N`` (F, k) and a
per-homothet offset matrix ``H`` (m, F): homothet ``i`` is
``{y : N @ y <= H[i]}``.
"""
import numpy as np


def classify_cell(V, N, H, tol):
    """Decide how a cell (vertex rows ``V``) relates to the homothets.

    Returns ``(inside, cut_homothet, cut_facet)``.  ``inside`` is the lowest
    index of a homothet holding every vertex within ``tol`` (else -1).  When
    nothing contains the cell, the cut pair names a facet plane that splits
    it strictly, taken from the homothet with the smallest worst violation
    among those that still meet the cell's interior; (-1, -1) if none does.
    """
    if H.shape[0] == 0:
        return -1, -1, -1
    viol = (V @ N.T)[None, :, :] - H[:, None, :]
    vmax = viol.max(axis=1)
    worst = vmax.max(axis=1)
    hits = np.flatnonzero(worst <= tol)
    if hits.size:
        return int(hits[0]), -1, -1
    vmin = viol.min(axis=1)
    for i in np.argsort(worst, kind="stable"):
        bad = vmax[i] > tol
        if np.any(vmin[i][bad] >= -tol):
            continue
        score = np.where(bad, vmax[i], -np.inf)
        return -1, int(i), int(np.argmax(score))
    return -1, -1, -1


def nearest_homothet(P, N, b, C):
    """Smallest homothety ratio of each point over the centers ``C``.

    The body is ``{y : N @ y <= b}`` with ``b > 0``; the ratio of ``p`` about
    center ``c`` is ``max_f N_f.(p - c) / b_f``.  Returns ``(ratio, index)``
    with the lowest index on ties.
    """
    NP = P @ N.T
    NC = C @ N.T
    R = ((NP[:, None, :] - NC[None, :, :]) / b).max(axis=2)
    idx = np.argmin(R, axis=1)
    return R[np.arange(len(P)), idx], idx


def min_violation(P, N, H):
    """For each point, ``min_i max_f (N_f.p - H[i, f])``; +inf with no homothets."""
    if H.shape[0] == 0:
        return np.full(len(P), np.inf)
    viol = (P @ N.T)[:, None, :] - H[None, :, :]
    return viol.max(axis=2).min(axis=1)
