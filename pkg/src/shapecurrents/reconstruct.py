"""Shape recovery from discretized currents.

Piecewise-constant currents record per-cell coordinate jumps (dx, dy); a
curve in general position is recovered cell by cell as the polyline through
the element-edge crossing points.  Higher-order corrections are exposed as
standalone 1D moment solvers, plus the points-on-a-line moment example.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .currents import segment_array
from .curve import SampledCurve
from .errors import (ConfigurationError, InconsistentJumpsError,
                     InconsistentMomentsError, NotInGeneralPositionError)
from .mesh import StructuredMesh

OCCUPANCY_REL_TOL = 1e-10
PLACEMENT_TOL = 1e-9


def cell_jumps(curve: SampledCurve, mesh: StructuredMesh):
    """Per-triangle signed coordinate increments (dx, dy) of the curve."""
    segs = segment_array(curve)
    x0, _, y0, _ = mesh.domain
    g = np.empty_like(segs)
    g[..., 0] = (segs[..., 0] - x0) / mesh.hx
    g[..., 1] = (segs[..., 1] - y0) / mesh.hy
    seg_idx, t0, t1, cells = kernels.clip_grid_segments(
        np.ascontiguousarray(g), mesh.M)
    D = segs[seg_idx, 1] - segs[seg_idx, 0]
    disp = (t1 - t0)[:, None] * D
    dx = np.zeros(mesh.n_cells)
    dy = np.zeros(mesh.n_cells)
    np.add.at(dx, cells, disp[:, 0])
    np.add.at(dy, cells, disp[:, 1])
    return dx, dy


def dump_jumps_csv(path, dx: np.ndarray, dy: np.ndarray):
    rows = np.column_stack([np.arange(len(dx)), dx, dy])
    np.savetxt(path, rows, delimiter=",", header="cell_id,dx,dy", comments="",
               fmt=["%d", "%.17g", "%.17g"])


def _occupancy(dx, dy, mesh):
    diam = float(np.hypot(mesh.domain[1] - mesh.domain[0],
                          mesh.domain[3] - mesh.domain[2]))
    return (np.abs(dx) + np.abs(dy)) > OCCUPANCY_REL_TOL * diam


def occupied_cells(dx: np.ndarray, dy: np.ndarray, mesh: StructuredMesh):
    """Ordered chain of occupied triangles: (cells, closed flag).

    Each occupied cell must touch exactly two occupied neighbors (or one, at
    the two ends of an open path); anything else means the mesh is too
    coarse or the curve is not in general position.
    """
    occ = _occupancy(dx, dy, mesh)
    ids = np.flatnonzero(occ)
    if len(ids) == 0:
        return [], True
    occ_set = set(ids.tolist())
    nbrs = {}
    ends = []
    for c in ids:
        ns = [n for n in mesh.edge_neighbors(int(c)) if n >= 0 and n in occ_set]
        if len(ns) not in (1, 2):
            raise NotInGeneralPositionError(
                f"cell {c} has {len(ns)} occupied neighbors (expected 1 or 2)")
        nbrs[int(c)] = ns
        if len(ns) == 1:
            ends.append(int(c))
    if len(ends) not in (0, 2):
        raise NotInGeneralPositionError(
            f"{len(ends)} chain endpoints found (expected 0 or 2)")
    closed = not ends
    start = min(ends) if ends else int(ids[0])
    chain = [start]
    prev = -1
    while True:
        nxt = [n for n in nbrs[chain[-1]] if n != prev]
        if not nxt:
            break
        prev = chain[-1]
        chain.append(nxt[0])
        if closed and chain[-1] == start:
            chain.pop()
            break
    if len(chain) != len(ids):
        raise NotInGeneralPositionError("occupied cells form more than one chain")
    return chain, closed


def segment_from_jumps(vertices: np.ndarray, dx: float, dy: float,
                       entry_edge: int, exit_edge: int,
                       tol: float = PLACEMENT_TOL):
    """Place the vector (dx, dy) in a triangle with endpoints on two edges.

    Edge e runs from vertices[e] to vertices[(e+1) % 3].  Returns the
    (entry_point, exit_point) pair with exit - entry = (dx, dy).
    """
    if dx == 0.0 and dy == 0.0:
        raise InconsistentJumpsError("degenerate zero jump")
    V = np.asarray(vertices, dtype=float)
    a0, a1 = V[entry_edge], V[(entry_edge + 1) % 3]
    b0, b1 = V[exit_edge], V[(exit_edge + 1) % 3]
    # b0 + t_out (b1-b0) - a0 - t_in (a1-a0) = (dx, dy)
    A = np.column_stack([-(a1 - a0), b1 - b0])
    rhs = np.array([dx, dy]) + a0 - b0
    t_in, t_out = np.linalg.solve(A, rhs)
    scale = max(1.0, float(np.abs(V).max()))
    if not (-tol * scale <= t_in <= 1 + tol * scale
            and -tol * scale <= t_out <= 1 + tol * scale):
        raise InconsistentJumpsError(
            f"no placement on edges {entry_edge}/{exit_edge} fits jump "
            f"({dx:.3g}, {dy:.3g})")
    return a0 + t_in * (a1 - a0), b0 + t_out * (b1 - b0)


@dataclass
class ReconstructedCurve:
    """Edge-crossing polyline recovered from piecewise-constant currents."""

    points: np.ndarray
    closed: bool
    chain: list = field(default_factory=list)

    def to_curve(self) -> SampledCurve:
        n = len(self.points)
        params = np.arange(n) / (n if self.closed else max(n - 1, 1))
        return SampledCurve(params=params, points=np.asarray(self.points),
                            closed=self.closed)


def _shared_edge(mesh: StructuredMesh, cell: int, other: int) -> int:
    for e, n in enumerate(mesh.edge_neighbors(cell)):
        if n == other:
            return e
    raise NotInGeneralPositionError(f"cells {cell} and {other} do not share an edge")


def _place_endpoint_cell(chain, k, dx, dy, mesh, e_known, entry_free):
    """Endpoint cell of a short open chain: guess the free edge by placement."""
    c = chain[k]
    V = mesh.cell_vertices(c)
    last_err = None
    for cand in range(3):
        if cand == e_known:
            continue
        try:
            if entry_free:
                return segment_from_jumps(V, dx[c], dy[c], cand, e_known)
            return segment_from_jumps(V, dx[c], dy[c], e_known, cand)
        except InconsistentJumpsError as err:
            last_err = err
    raise last_err


def _solve_chain(chain, closed, dx, dy, mesh):
    """Entry/exit points per chain cell; raises when a placement fails."""
    n = len(chain)
    entries, exits = [None] * n, [None] * n
    if not closed and n == 1:
        raise NotInGeneralPositionError(
            "open chain with a single occupied cell is underdetermined")
    for k, c in enumerate(chain):
        if not closed and k in (0, n - 1):
            continue
        V = mesh.cell_vertices(c)
        entries[k], exits[k] = segment_from_jumps(
            V, dx[c], dy[c],
            _shared_edge(mesh, c, chain[k - 1]),
            _shared_edge(mesh, c, chain[(k + 1) % n]))
    if not closed:
        c0, cn = chain[0], chain[-1]
        if n == 2:
            # no interior cell fixes the shared crossing; fall back to
            # constraining each free endpoint to lie on a cell edge
            e0 = _shared_edge(mesh, c0, chain[1])
            en = _shared_edge(mesh, cn, chain[-2])
            entries[0], exits[0] = _place_endpoint_cell(
                chain, 0, dx, dy, mesh, e0, entry_free=True)
            entries[-1], exits[-1] = _place_endpoint_cell(
                chain, n - 1, dx, dy, mesh, en, entry_free=False)
        else:
            # the free endpoint of an open chain is the neighbouring cell's
            # shared-edge crossing shifted by this cell's jump
            exits[0] = entries[1]
            entries[0] = exits[0] - np.array([dx[c0], dy[c0]])
            entries[-1] = exits[-2]
            exits[-1] = entries[-1] + np.array([dx[cn], dy[cn]])
    return entries, exits


def reconstruct_pc(dx: np.ndarray, dy: np.ndarray,
                   mesh: StructuredMesh) -> ReconstructedCurve:
    """Recover the edge-crossing polyline from per-cell jumps.

    Crossing points on interior shared edges are averaged between the two
    adjacent cells' placements; both chain traversal directions are tried.
    """
    chain, closed = occupied_cells(dx, dy, mesh)
    if not chain:
        return ReconstructedCurve(points=np.empty((0, 2)), closed=True, chain=[])
    try:
        entries, exits = _solve_chain(chain, closed, dx, dy, mesh)
    except InconsistentJumpsError:
        chain = chain[::-1]
        entries, exits = _solve_chain(chain, closed, dx, dy, mesh)
    n = len(chain)
    pts = []
    if not closed:
        pts.append(entries[0])
    for k in range(n if closed else n - 1):
        pts.append(0.5 * (exits[k] + entries[(k + 1) % n]))
    if not closed:
        pts.append(exits[-1])
    return ReconstructedCurve(points=np.array(pts), closed=closed, chain=chain)


# -- 1D moment-corrected interval reconstruction ------------------------------


def quadratic_correction(g0: float, gh: float, I: float, h: float) -> float:
    """Bubble amplitude a0 with int of g0(h-x)/h + gh*x/h + a0*x(h-x) equal I."""
    if h <= 0:
        raise ConfigurationError("h must be positive")
    return 6.0 / h ** 3 * (I - h * (g0 + gh) / 2.0)


def cubic_reconstruct(g0: float, gh: float, I: float, Ixg: float,
                      h: float) -> np.ndarray:
    """Coefficients (c0..c3) of the cubic matching endpoints and both moments."""
    if h <= 0:
        raise ConfigurationError("h must be positive")
    A = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [1.0, h, h ** 2, h ** 3],
        [h, h ** 2 / 2, h ** 3 / 3, h ** 4 / 4],
        [h ** 2 / 2, h ** 3 / 3, h ** 4 / 4, h ** 5 / 5],
    ])
    return np.linalg.solve(A, np.array([g0, gh, I, Ixg]))


def _gauss_integrate(coeffs: np.ndarray, h: float, weight_power: int,
                     square: bool) -> float:
    x, w = np.polynomial.legendre.leggauss(8)
    xs = 0.5 * h * (x + 1.0)
    ws = 0.5 * h * w
    g = np.polynomial.polynomial.polyval(xs, coeffs)
    if square:
        g = g * g
    return float(np.sum(ws * xs ** weight_power * g))


def quartic_reconstruct(g0: float, gh: float, I: float, Ixg: float,
                        Ig2: float, h: float):
    """Quartic(s) matching endpoints, both linear moments, and int g^2.

    Returns (selected coefficients (c0..c4), list of real solutions,
    used_cubic_fallback).  The bubble form g = linear + x(h-x)(a + bx + cx^2)
    satisfies the endpoint constraints identically; the two linear moments
    determine (a, b) affinely in c, and the quadratic moment leaves a scalar
    quadratic in c with at most two real roots.  The root whose coefficients
    are closer to the cubic solver's answer is selected; with no real root
    the cubic answer is returned with the fallback flag set.
    """
    if h <= 0:
        raise ConfigurationError("h must be positive")
    cubic = np.append(cubic_reconstruct(g0, gh, I, Ixg, h), 0.0)

    def coeffs_for(c: float) -> np.ndarray:
        # solve the two linear moment equations for (a, b) given c
        A = np.array([[h ** 3 / 6, h ** 4 / 12], [h ** 4 / 12, h ** 5 / 20]])
        IL = h * (g0 + gh) / 2.0
        IxL = h ** 2 * (g0 / 6.0 + gh / 3.0)
        rhs = np.array([I - IL - c * h ** 5 / 20.0,
                        Ixg - IxL - c * h ** 6 / 30.0])
        a, b = np.linalg.solve(A, rhs)
        lin = np.array([g0, (gh - g0) / h])
        bubble = np.polynomial.polynomial.polymul([0.0, h, -1.0], [a, b, c])
        out = np.zeros(5)
        out[:2] += lin
        out[:len(bubble)] += bubble
        return out

    # int g^2 is exactly quadratic in c: recover it from three evaluations
    q = np.array([_gauss_integrate(coeffs_for(c), h, 0, True) - Ig2
                  for c in (0.0, 1.0, 2.0)])
    q2 = (q[2] - 2.0 * q[1] + q[0]) / 2.0
    q1 = q[1] - q[0] - q2
    q0 = q[0]
    disc = q1 * q1 - 4.0 * q2 * q0
    if abs(q2) < 1e-300 or disc < 0:
        return cubic, [], True
    roots = [(-q1 - np.sqrt(disc)) / (2.0 * q2), (-q1 + np.sqrt(disc)) / (2.0 * q2)]
    solutions = [coeffs_for(c) for c in roots]
    dists = [np.linalg.norm(sol - cubic) for sol in solutions]
    return solutions[int(np.argmin(dists))], solutions, False


def recover_points_from_moments(moments, n: int, tol: float = 1e-8):
    """Recover n reals from their power sums m_k = sum x_j^k, k = 1..len(moments).

    Newton's identities convert power sums to elementary symmetric
    polynomials; the points are the roots of the associated polynomial.
    """
    m = np.asarray(moments, dtype=float)
    if n > len(m):
        raise ConfigurationError("need at least n moments to recover n points")
    e = np.zeros(n + 1)
    e[0] = 1.0
    for k in range(1, n + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1.0) ** (i - 1) * e[k - i] * m[i - 1]
        e[k] = acc / k
    poly = np.array([(-1.0) ** k * e[k] for k in range(n + 1)])
    roots = np.roots(poly)
    scale = max(1.0, float(np.abs(roots).max())) if len(roots) else 1.0
    if np.any(np.abs(roots.imag) > tol * scale):
        raise InconsistentMomentsError(
            "moments are not realizable by real points")
    return np.sort(roots.real)
