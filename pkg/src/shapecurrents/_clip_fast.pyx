# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled segment clipping against structured-mesh grid lines.

Same contract as the pure-Python twin in _clip_py: coordinates in grid units,
line families u = k, v = k, u - v = k.
"""

from libc.math cimport floor, ceil

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline int _crossings(double a0, double a1, double* ts, int nt,
                           double tol) nogil:
    cdef double lo = a0 if a0 <= a1 else a1
    cdef double hi = a1 if a0 <= a1 else a0
    cdef double da = a1 - a0
    cdef double t
    cdef long k, klo, khi
    if hi - lo < tol:
        return nt
    klo = <long>ceil(lo - tol)
    khi = <long>floor(hi + tol)
    for k in range(klo, khi + 1):
        t = (k - a0) / da
        if tol < t < 1.0 - tol:
            ts[nt] = t
            nt += 1
    return nt


cdef inline long _locate(double u, double v, long M, double tol) nogil:
    cdef long j = <long>floor(u)
    cdef long i = <long>floor(v)
    cdef double uu, vv
    if u - j < tol and j > 0:
        j -= 1
    if j < 0:
        j = 0
    elif j > M - 1:
        j = M - 1
    if v - i < tol and i > 0:
        i -= 1
    if i < 0:
        i = 0
    elif i > M - 1:
        i = M - 1
    uu = u - j
    vv = v - i
    return 2 * (i * M + j) + (0 if vv <= uu + tol else 1)


def clip_grid_segments(double[:, :, :] P, long M, double tol=1e-12):
    """Clip segments P (n, 2, 2) in grid units; see _clip_py.clip_grid_segments."""
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t cap = 16, total = 0, i
    cdef int nt, a, b
    cdef double u0, v0, u1, v1, tm, t, prev, tmp
    cdef double ts[512]

    seg_idx = np.empty(4 * n + 64, dtype=np.int64)
    t0s = np.empty(4 * n + 64)
    t1s = np.empty(4 * n + 64)
    cells = np.empty(4 * n + 64, dtype=np.int64)
    cdef long[:] seg_v = seg_idx
    cdef double[:] t0_v = t0s
    cdef double[:] t1_v = t1s
    cdef long[:] cell_v = cells

    for i in range(n):
        u0 = P[i, 0, 0]
        v0 = P[i, 0, 1]
        u1 = P[i, 1, 0]
        v1 = P[i, 1, 1]
        ts[0] = 0.0
        ts[1] = 1.0
        nt = 2
        nt = _crossings(u0, u1, ts, nt, tol)
        nt = _crossings(v0, v1, ts, nt, tol)
        nt = _crossings(u0 - v0, u1 - v1, ts, nt, tol)
        # insertion sort: nt is small
        for a in range(1, nt):
            t = ts[a]
            b = a - 1
            while b >= 0 and ts[b] > t:
                ts[b + 1] = ts[b]
                b -= 1
            ts[b + 1] = t
        if total + nt >= seg_idx.shape[0]:
            grow = max(2 * seg_idx.shape[0], total + nt + 64)
            seg_idx = np.resize(seg_idx, grow)
            t0s = np.resize(t0s, grow)
            t1s = np.resize(t1s, grow)
            cells = np.resize(cells, grow)
            seg_v, t0_v, t1_v, cell_v = seg_idx, t0s, t1s, cells
        prev = ts[0]
        for a in range(1, nt):
            t = ts[a]
            if t - prev < tol:
                continue
            tm = 0.5 * (prev + t)
            seg_v[total] = i
            t0_v[total] = prev
            t1_v[total] = t
            cell_v[total] = _locate(u0 + tm * (u1 - u0), v0 + tm * (v1 - v0), M, tol)
            total += 1
            prev = t
    return (seg_idx[:total].copy(), t0s[:total].copy(), t1s[:total].copy(),
            cells[:total].copy())
