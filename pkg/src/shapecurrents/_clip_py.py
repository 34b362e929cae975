"""Pure-Python segment clipping against the structured-mesh grid lines.

Reference implementation; `kernels` prefers the compiled twin when available.
Coordinates are in grid units: u = (x - x0)/hx, v = (y - y0)/hy, so the three
line families are u = k, v = k, and u - v = k for integer k.
"""

from __future__ import annotations

import math

import numpy as np

from .mesh import locate_cells


def _crossings(a0: float, a1: float, ts: list, tol: float) -> None:
    lo, hi = (a0, a1) if a0 <= a1 else (a1, a0)
    if hi - lo < tol:
        return
    da = a1 - a0
    for k in range(math.ceil(lo - tol), math.floor(hi + tol) + 1):
        t = (k - a0) / da
        if tol < t < 1.0 - tol:
            ts.append(t)


def clip_grid_segments(P: np.ndarray, M: int, tol: float = 1e-12):
    """Clip the n closed-or-open polyline segments P[i] -> P[i+1] is NOT assumed;
    P has shape (n, 2, 2): per-segment endpoint pairs in grid units.

    Returns (seg_idx, t0, t1, cells): one row per sub-segment, with t0 < t1
    the segment parameters of the piece and cells the containing triangle.
    """
    seg_idx, t0s, t1s, mids_u, mids_v = [], [], [], [], []
    for i in range(P.shape[0]):
        u0, v0 = P[i, 0]
        u1, v1 = P[i, 1]
        ts = [0.0, 1.0]
        _crossings(u0, u1, ts, tol)
        _crossings(v0, v1, ts, tol)
        _crossings(u0 - v0, u1 - v1, ts, tol)
        ts.sort()
        prev = ts[0]
        for t in ts[1:]:
            if t - prev < tol:
                continue
            tm = 0.5 * (prev + t)
            seg_idx.append(i)
            t0s.append(prev)
            t1s.append(t)
            mids_u.append(u0 + tm * (u1 - u0))
            mids_v.append(v0 + tm * (v1 - v0))
            prev = t
    if not seg_idx:
        empty = np.empty(0)
        return (np.empty(0, dtype=np.int64), empty, empty.copy(),
                np.empty(0, dtype=np.int64))
    cells = locate_cells(np.array(mids_u), np.array(mids_v), M, tol)
    return (np.array(seg_idx, dtype=np.int64), np.array(t0s), np.array(t1s), cells)
