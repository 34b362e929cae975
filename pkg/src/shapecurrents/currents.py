"""Current vectors f_i = [curve](w_i dx), [curve](w_i dy) and their evaluation."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .curve import SampledCurve, polyline_length
from .errors import ConfigurationError, OutOfDomainError
from .space import FormSpace, space_from_descriptor

RULES = ("midpoint", "simpson")


@dataclass
class CurrentVector:
    """Coefficients of a curve's current against the w_i dx / w_i dy basis."""

    space: FormSpace
    fx: np.ndarray
    fy: np.ndarray

    def __post_init__(self):
        self.fx = np.asarray(self.fx, dtype=float)
        self.fy = np.asarray(self.fy, dtype=float)
        if self.fx.shape != (self.space.dof_count,) or self.fy.shape != self.fx.shape:
            raise ConfigurationError("component length does not match the space")

    def _check(self, other: "CurrentVector"):
        if not self.space.matches(other.space):
            raise ConfigurationError("current vectors live on different spaces")

    def __add__(self, other):
        self._check(other)
        return CurrentVector(self.space, self.fx + other.fx, self.fy + other.fy)

    def __sub__(self, other):
        self._check(other)
        return CurrentVector(self.space, self.fx - other.fx, self.fy - other.fy)

    def __mul__(self, a):
        return CurrentVector(self.space, a * self.fx, a * self.fy)

    __rmul__ = __mul__

    def __neg__(self):
        return CurrentVector(self.space, -self.fx, -self.fy)

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.fx, self.fy])

    def to_json(self) -> str:
        return json.dumps({"space": self.space.descriptor(),
                           "fx": self.fx.tolist(), "fy": self.fy.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "CurrentVector":
        data = json.loads(text)
        space = space_from_descriptor(data["space"])
        return cls(space, np.array(data["fx"]), np.array(data["fy"]))

    def dump_csv(self, path):
        rows = np.column_stack([np.arange(self.space.dof_count), self.fx, self.fy])
        np.savetxt(path, rows, delimiter=",", header="dof,fx,fy", comments="",
                   fmt=["%d", "%.17g", "%.17g"])


def segment_array(curve: SampledCurve) -> np.ndarray:
    """Segment endpoints stacked as (n_segments, 2, 2)."""
    p, q = curve.segments()
    return np.stack([p, q], axis=1)


def _check_domain(points: np.ndarray, domain, tol: float = 1e-12):
    x0, x1, y0, y1 = domain
    bad = ((points[:, 0] < x0 - tol) | (points[:, 0] > x1 + tol)
           | (points[:, 1] < y0 - tol) | (points[:, 1] > y1 + tol))
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise OutOfDomainError(idx, tuple(points[idx]))


def _to_grid(points: np.ndarray, space: FormSpace) -> np.ndarray:
    x0, _, y0, _ = space.domain
    mesh = space.mesh
    g = np.empty_like(points)
    g[..., 0] = (points[..., 0] - x0) / mesh.hx
    g[..., 1] = (points[..., 1] - y0) / mesh.hy
    # nudge points sitting exactly on a mesh vertex off of it (measure zero)
    on_int = np.abs(g - np.round(g)) < 1e-14 * (1.0 + np.abs(g))
    vertex = on_int[..., 0] & on_int[..., 1]
    if np.any(vertex):
        g[vertex] += 1e-13 * (1.0 + np.abs(g[vertex]))
    return g


def _clipped_subsegments(curve: SampledCurve, space: FormSpace):
    """Clip each polyline segment against the mesh; sub-segment geometry."""
    segs = segment_array(curve)
    gsegs = _to_grid(segs, space)
    seg_idx, t0, t1, cells = kernels.clip_grid_segments(
        np.ascontiguousarray(gsegs), space.mesh.M)
    A = segs[seg_idx, 0]
    D = segs[seg_idx, 1] - A
    tmid = 0.5 * (t0 + t1)
    p = A + t0[:, None] * D
    q = A + t1[:, None] * D
    mid = A + tmid[:, None] * D
    disp = (t1 - t0)[:, None] * D
    return seg_idx, p, q, mid, disp, cells, tmid


def _accumulate(fx, fy, weights, dofs, disp):
    np.add.at(fx, dofs, weights * disp[:, 0:1])
    np.add.at(fy, dofs, weights * disp[:, 1:2])


def evaluate_current(curve: SampledCurve, space: FormSpace,
                     rule: str = "midpoint") -> CurrentVector:
    """Integrate the test 1-forms along the polyline.

    Midpoint uses w(mid)*(q - p) per (sub-)segment.  Simpson on Lagrange
    spaces uses (w(p) + 4w(mid) + w(q))/6 * (q - p) per clipped sub-segment;
    on monomial spaces it integrates over the quadratic interpolant of
    consecutive sample pairs, which restores the fourth-order rate that the
    per-chord form loses to the polyline's own geometric error.
    """
    if rule not in RULES:
        raise ConfigurationError(f"unknown quadrature rule {rule!r}")
    _check_domain(curve.points, space.domain)
    if space.kind == "monomial":
        return _evaluate_monomial(curve, space, rule)

    fx = np.zeros(space.dof_count)
    fy = np.zeros(space.dof_count)
    _, p, q, mid, disp, cells, _ = _clipped_subsegments(curve, space)
    vm, dofs = space.eval_basis(mid, cells)
    if rule == "midpoint":
        _accumulate(fx, fy, vm, dofs, disp)
    else:
        vp, _ = space.eval_basis(p, cells)
        vq, _ = space.eval_basis(q, cells)
        _accumulate(fx, fy, (vp + 4.0 * vm + vq) / 6.0, dofs, disp)
    return CurrentVector(space, fx, fy)


def _evaluate_monomial(curve: SampledCurve, space: FormSpace,
                       rule: str) -> CurrentVector:
    segs = segment_array(curve)
    if rule == "midpoint":
        mid = 0.5 * (segs[:, 0] + segs[:, 1])
        disp = segs[:, 1] - segs[:, 0]
        V, _ = space.eval_basis(mid)
        return CurrentVector(space, V.T @ disp[:, 0], V.T @ disp[:, 1])
    n = segs.shape[0]
    if n % 2:
        raise ConfigurationError(
            "Simpson on a monomial space needs an even segment count")
    pts = curve.points
    npts = pts.shape[0]
    k = np.arange(0, n, 2)
    P0 = pts[k]
    P1 = pts[(k + 1) % npts]
    P2 = pts[(k + 2) % npts]
    # tangents of the quadratic through (P0, P1, P2) at s = 0, 1/2, 1
    d0 = -3.0 * P0 + 4.0 * P1 - P2
    dm = P2 - P0
    d1 = P0 - 4.0 * P1 + 3.0 * P2
    V0, _ = space.eval_basis(P0)
    V1, _ = space.eval_basis(P1)
    V2, _ = space.eval_basis(P2)
    fx = (V0.T @ d0[:, 0] + 4.0 * (V1.T @ dm[:, 0]) + V2.T @ d1[:, 0]) / 6.0
    fy = (V0.T @ d0[:, 1] + 4.0 * (V1.T @ dm[:, 1]) + V2.T @ d1[:, 1]) / 6.0
    return CurrentVector(space, fx, fy)


def clip_segment(p, q, mesh):
    """Split segment [p, q] at cell boundaries: list of (cell_id, (p_sub, q_sub))."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    seg = np.array([[p, q]])
    x0, _, y0, _ = mesh.domain
    g = np.empty_like(seg)
    g[..., 0] = (seg[..., 0] - x0) / mesh.hx
    g[..., 1] = (seg[..., 1] - y0) / mesh.hy
    _, t0, t1, cells = kernels.clip_grid_segments(np.ascontiguousarray(g), mesh.M)
    out = []
    for a, b, c in zip(t0, t1, cells):
        out.append((int(c), (p + a * (q - p), p + b * (q - p))))
    return out


def directional_derivative(curve: SampledCurve, X: np.ndarray,
                           alpha_x: np.ndarray, alpha_y: np.ndarray,
                           space: FormSpace) -> float:
    """Derivative of the current map at the curve in direction X.

    For alpha = a1 dx + a2 dy this is the curve integral of
    (d_x a2 - d_y a1) (X1 dy - X2 dx), computed by the midpoint rule with
    X interpolated linearly along each segment.
    """
    X = np.asarray(X, dtype=float)
    if X.shape != curve.points.shape:
        raise ConfigurationError("X must supply one 2D vector per curve point")
    _check_domain(curve.points, space.domain)
    alpha_x = np.asarray(alpha_x, dtype=float)
    alpha_y = np.asarray(alpha_y, dtype=float)
    n = curve.points.shape[0]
    idx0 = np.arange(segment_array(curve).shape[0])
    idx1 = (idx0 + 1) % n
    if space.kind == "monomial":
        segs = segment_array(curve)
        mid = 0.5 * (segs[:, 0] + segs[:, 1])
        disp = segs[:, 1] - segs[:, 0]
        grads, _ = space.eval_basis_grad(mid)
        curl = grads[:, :, 0] @ alpha_y - grads[:, :, 1] @ alpha_x
        Xm = 0.5 * (X[idx0] + X[idx1])
        return float(np.sum(curl * (Xm[:, 0] * disp[:, 1] - Xm[:, 1] * disp[:, 0])))
    seg_idx, p, q, mid, disp, cells, tmid = _clipped_subsegments(curve, space)
    grads, dofs = space.eval_basis_grad(mid, cells)
    curl = (np.sum(grads[:, :, 0] * alpha_y[dofs], axis=1)
            - np.sum(grads[:, :, 1] * alpha_x[dofs], axis=1))
    Xm = (X[idx0[seg_idx]]
          + tmid[:, None] * (X[idx1[seg_idx]] - X[idx0[seg_idx]]))
    return float(np.sum(curl * (Xm[:, 0] * disp[:, 1] - Xm[:, 1] * disp[:, 0])))


def arclength_functional(curve: SampledCurve) -> float:
    """Sum of segment lengths (non-robust baseline functional)."""
    return polyline_length(curve)
