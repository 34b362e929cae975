"""Closed (and open) planar polyline curves and the generators used in experiments.

A curve is stored as parameter values ``t_i`` in [0, 1) together with sample
points ``(x_i, y_i)``.  Closed curves wrap around: segment i joins point i to
point (i+1) mod n.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCurveError


@dataclass(frozen=True)
class SampledCurve:
    """A discrete Lipschitz immersion: an oriented polyline with parameters."""

    params: np.ndarray
    points: np.ndarray  # shape (n, 2)
    closed: bool = True

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        points = np.asarray(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2:
            raise InvalidCurveError("points must have shape (n, 2)")
        if params.shape != (points.shape[0],):
            raise InvalidCurveError("params and points must have equal length")
        if self.closed and len(params) < 3:
            raise InvalidCurveError("a closed curve needs at least 3 points")
        if len(params) < 2:
            raise InvalidCurveError("a curve needs at least 2 points")
        if np.any(np.diff(params) <= 0) or params[0] < 0 or params[-1] >= 1:
            raise InvalidCurveError("params must be strictly increasing in [0, 1)")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "points", points)

    @property
    def n(self) -> int:
        return len(self.params)

    def segments(self):
        """Segment start and end points, (m, 2) each; wraps if closed."""
        p = self.points
        if self.closed:
            return p, np.roll(p, -1, axis=0)
        return p[:-1], p[1:]

    def dump_csv(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_csv())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# closed={'true' if self.closed else 'false'}\n")
        buf.write("t,x,y\n")
        for t, (x, y) in zip(self.params, self.points):
            buf.write(f"{float(t)!r},{float(x)!r},{float(y)!r}\n")
        return buf.getvalue()


def load_csv(path) -> SampledCurve:
    closed = True
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                meta = line.lstrip("#").strip()
                if meta.startswith("closed="):
                    closed = meta.split("=", 1)[1].lower() == "true"
                continue
            if line.startswith("t,"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise InvalidCurveError(f"{path}: malformed CSV row at line {lineno}")
            try:
                rows.append([float(v) for v in parts])
            except ValueError as exc:
                raise InvalidCurveError(
                    f"{path}: malformed CSV row at line {lineno}"
                ) from exc
    arr = np.array(rows, dtype=float)
    if arr.size == 0:
        raise InvalidCurveError(f"{path}: no data rows")
    return SampledCurve(params=arr[:, 0], points=arr[:, 1:], closed=closed)


@dataclass
class FourierCoeffs:
    """Finite map from integer frequency k to complex amplitude."""

    coeffs: dict = field(default_factory=dict)

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        z = np.zeros_like(t, dtype=complex)
        for k, a in self.coeffs.items():
            z += a * np.exp(2j * np.pi * k * t)
        return z


def random_fourier_coeffs(rng, kmin=2, kmax=6, z1=0.5) -> FourierCoeffs:
    """Random smooth shape recipe: z1 fixed, higher modes ~ N(0, 1/(1+|k|^3))."""
    coeffs = {0: 0.0, 1: complex(z1), -1: 0.0}
    for k in range(kmin, kmax + 1):
        # complex coefficient with total standard deviation 1/(1+|k|^3)
        std = 1.0 / (1.0 + abs(k) ** 3) / np.sqrt(2.0)
        coeffs[k] = complex(rng.normal(0.0, std), rng.normal(0.0, std))
    return FourierCoeffs(coeffs)


def fourier_shape(coeffs: FourierCoeffs, n: int) -> SampledCurve:
    if n < 3:
        raise InvalidCurveError("fourier_shape needs n >= 3")
    t = np.arange(n) / n
    z = coeffs.evaluate(t)
    return SampledCurve(params=t, points=np.column_stack([z.real, z.imag]))


def circle(radius=0.5, n=512, center=(0.0, 0.0), phase=0.0) -> SampledCurve:
    """Circle sampled at angles 2*pi*(i/n + phase).

    A nonzero phase keeps samples off the axis extremes, which matters when
    the circle is tangent to a mesh line there.
    """
    a = radius * np.exp(2j * np.pi * phase)
    return fourier_shape(FourierCoeffs({0: complex(*center), 1: a}), n)


def supercircle(r_exp: float, n: int) -> SampledCurve:
    """Points on |x|^r + |y|^r = (1/2)^r, counterclockwise."""
    if r_exp <= 0:
        raise InvalidCurveError("supercircle exponent must be positive")
    if n < 3:
        raise InvalidCurveError("supercircle needs n >= 3")
    t = np.arange(n) / n
    theta = 2 * np.pi * t
    c, s = np.cos(theta), np.sin(theta)
    x = 0.5 * np.sign(c) * np.abs(c) ** (2.0 / r_exp)
    y = 0.5 * np.sign(s) * np.abs(s) ** (2.0 / r_exp)
    return SampledCurve(params=t, points=np.column_stack([x, y]))


def wiggly_circle(eps: float, omega: int, n: int) -> SampledCurve:
    """Circle of radius 0.5 with radius scaled by 1 + eps*cos(omega*theta)."""
    if not 0 <= eps < 1:
        raise InvalidCurveError("wiggly amplitude must be in [0, 1)")
    if omega < 0:
        raise InvalidCurveError("wiggly frequency must be nonnegative")
    t = np.arange(n) / n
    theta = 2 * np.pi * t
    r = 0.5 * (1.0 + eps * np.cos(omega * theta))
    return SampledCurve(params=t, points=np.column_stack([r * np.cos(theta), r * np.sin(theta)]))


def bowtie(n: int) -> SampledCurve:
    """Figure-eight z(t) = (0.25 sin 4πt, 0.5 sin 2πt); our bowtie shape."""
    t = np.arange(n) / n
    x = 0.25 * np.sin(4 * np.pi * t)
    y = 0.5 * np.sin(2 * np.pi * t)
    return SampledCurve(params=t, points=np.column_stack([x, y]))


def segment_line(n: int) -> SampledCurve:
    """Open unit segment from (0,0) to (1,0) with n equally spaced points."""
    if n < 2:
        raise InvalidCurveError("segment_line needs n >= 2")
    x = np.linspace(0.0, 1.0, n)
    return SampledCurve(
        params=np.arange(n) / n,
        points=np.column_stack([x, np.zeros(n)]),
        closed=False,
    )


def add_noise(curve: SampledCurve, eps: float, seed=0, fix_endpoints=False) -> SampledCurve:
    """Add i.i.d. N(0, eps^2) to both coordinates of every point."""
    if eps < 0:
        raise InvalidCurveError("noise std must be nonnegative")
    if eps == 0:
        return curve
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, eps, size=curve.points.shape)
    if fix_endpoints:
        noise[0] = 0.0
        noise[-1] = 0.0
    return SampledCurve(curve.params, curve.points + noise, curve.closed)


def polyline_length(curve: SampledCurve) -> float:
    p, q = curve.segments()
    return float(np.sum(np.hypot(q[:, 0] - p[:, 0], q[:, 1] - p[:, 1])))


def reverse_orientation(curve: SampledCurve) -> SampledCurve:
    pts = curve.points[::-1].copy()
    return SampledCurve(curve.params, pts, curve.closed)


def _interp_at_arclength(curve: SampledCurve, fracs: np.ndarray) -> np.ndarray:
    """Points on the polyline at the given fractions of total arclength."""
    p, q = curve.segments()
    seglen = np.hypot(q[:, 0] - p[:, 0], q[:, 1] - p[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    total = cum[-1]
    s = np.clip(fracs, 0.0, 1.0) * total
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seglen) - 1)
    local = np.where(seglen[idx] > 0, (s - cum[idx]) / np.where(seglen[idx] > 0, seglen[idx], 1.0), 0.0)
    return p[idx] + local[:, None] * (q[idx] - p[idx])


def reparameterize(curve: SampledCurve, sigma_t: float, seed=0) -> SampledCurve:
    """Jittered arclength resampling: same image, perturbed parameter positions."""
    if sigma_t < 0:
        raise InvalidCurveError("sigma_t must be nonnegative")
    if sigma_t == 0:
        return curve
    n = curve.n
    rng = np.random.default_rng(seed)
    u = (np.arange(n) / n + rng.normal(0.0, sigma_t, size=n)) % 1.0
    u = np.sort(u)
    # collapse duplicates so params stay strictly increasing
    for i in range(1, n):
        if u[i] <= u[i - 1]:
            u[i] = np.nextafter(u[i - 1], 1.0)
    u = np.minimum(u, np.nextafter(1.0, 0.0) - (n - 1 - np.arange(n)) * 0.0)
    pts = _interp_at_arclength(curve, u)
    return SampledCurve(params=u, points=pts, closed=curve.closed)
