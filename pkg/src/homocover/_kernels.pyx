# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_kernels_py``; same signatures."""
import numpy as np
from libc.math cimport INFINITY


def classify_cell(const double[:, ::1] V, const double[:, ::1] N,
                  const double[:, ::1] H, double tol):
    cdef Py_ssize_t r = V.shape[0], k = V.shape[1], F = N.shape[0], m = H.shape[0]
    cdef Py_ssize_t i, j, f, d, best_i = -1, best_f = -1
    cdef double s, v, w, best_w = INFINITY, top
    cdef bint relevant
    if m == 0:
        return -1, -1, -1
    proj_arr = np.empty((r, F))
    vmax_arr = np.empty(F)
    vmin_arr = np.empty(F)
    cdef double[:, ::1] proj = proj_arr
    cdef double[::1] vmax = vmax_arr
    cdef double[::1] vmin = vmin_arr
    for j in range(r):
        for f in range(F):
            s = 0.0
            for d in range(k):
                s += V[j, d] * N[f, d]
            proj[j, f] = s
    for i in range(m):
        w = -INFINITY
        for f in range(F):
            vmax[f] = -INFINITY
            vmin[f] = INFINITY
            for j in range(r):
                v = proj[j, f] - H[i, f]
                if v > vmax[f]:
                    vmax[f] = v
                if v < vmin[f]:
                    vmin[f] = v
            if vmax[f] > w:
                w = vmax[f]
        if w <= tol:
            return i, -1, -1
        relevant = True
        for f in range(F):
            if vmax[f] > tol and vmin[f] >= -tol:
                relevant = False
                break
        if relevant and w < best_w:
            best_w = w
            best_i = i
            top = -INFINITY
            for f in range(F):
                if vmax[f] > tol and vmax[f] > top:
                    top = vmax[f]
                    best_f = f
    return -1, best_i, best_f


def nearest_homothet(const double[:, ::1] P, const double[:, ::1] N,
                     const double[::1] b, const double[:, ::1] C):
    cdef Py_ssize_t s = P.shape[0], k = P.shape[1], F = N.shape[0], m = C.shape[0]
    cdef Py_ssize_t p, i, f, d
    cdef double acc, r, best
    ratio_arr = np.empty(s)
    index_arr = np.empty(s, dtype=np.intp)
    NC_arr = np.empty((m, F))
    cdef double[::1] ratio = ratio_arr
    cdef Py_ssize_t[::1] index = index_arr
    cdef double[:, ::1] NC = NC_arr
    cdef double[::1] NP = np.empty(F)
    for i in range(m):
        for f in range(F):
            acc = 0.0
            for d in range(k):
                acc += C[i, d] * N[f, d]
            NC[i, f] = acc
    for p in range(s):
        for f in range(F):
            acc = 0.0
            for d in range(k):
                acc += P[p, d] * N[f, d]
            NP[f] = acc
        best = INFINITY
        index[p] = 0
        for i in range(m):
            r = -INFINITY
            for f in range(F):
                acc = (NP[f] - NC[i, f]) / b[f]
                if acc > r:
                    r = acc
                    if r >= best:
                        break
            if r < best:
                best = r
                index[p] = i
        ratio[p] = best
    return ratio_arr, index_arr


def min_violation(const double[:, ::1] P, const double[:, ::1] N,
                  const double[:, ::1] H):
    cdef Py_ssize_t s = P.shape[0], k = P.shape[1], F = N.shape[0], m = H.shape[0]
    cdef Py_ssize_t p, i, f, d
    cdef double acc, v, best
    out_arr = np.empty(s)
    cdef double[::1] out = out_arr
    cdef double[::1] NP = np.empty(F)
    for p in range(s):
        for f in range(F):
            acc = 0.0
            for d in range(k):
                acc += P[p, d] * N[f, d]
            NP[f] = acc
        best = INFINITY
        for i in range(m):
            v = -INFINITY
            for f in range(F):
                acc = NP[f] - H[i, f]
                if acc > v:
                    v = acc
                    if v >= best:
                        break
            if v < best:
                best = v
        out[p] = best
    return out_arr
