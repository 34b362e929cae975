"""H^{-s} dual-norm shape metric: representers, norms, whitening, kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .currents import CurrentVector
from .errors import ConfigurationError
from .gram import GramOperator
from .space import FormSpace


@dataclass
class Representer:
    """Riesz representer of a current: b = G^{-1} (M G^{-1})^{s-1} f per component."""

    space: FormSpace
    bx: np.ndarray
    by: np.ndarray
    s: int
    sigma: float


def _check_space(f: CurrentVector, G: GramOperator):
    if not f.space.matches(G.space):
        raise ConfigurationError("current vector and Gram operator spaces differ")


def representer(f: CurrentVector, G: GramOperator, s: int = 1) -> Representer:
    _check_space(f, G)
    if s < 1 or s != int(s):
        raise ConfigurationError("s must be a positive integer")
    bx = G.solve_power(f.fx, s)
    by = G.solve_power(f.fy, s)
    return Representer(f.space, bx, by, int(s), G.sigma)


def dual_norm(f: CurrentVector, G: GramOperator, s: int = 1) -> float:
    """sqrt(fx^T G^{-s} fx + fy^T G^{-s} fy)."""
    rep = representer(f, G, s)
    val = float(f.fx @ rep.bx + f.fy @ rep.by)
    return float(np.sqrt(max(val, 0.0)))


def distance(f1: CurrentVector, f2: CurrentVector, G: GramOperator,
             s: int = 1) -> float:
    return dual_norm(f1 - f2, G, s)


def whiten(f: CurrentVector, G: GramOperator, s: int = 1) -> np.ndarray:
    """Coordinates w with ||w||_2 equal to the dual norm of f."""
    _check_space(f, G)
    return np.concatenate([G.whiten(f.fx, s), G.whiten(f.fy, s)])


def representer_field_eval(rep: Representer, space: FormSpace,
                           grid: np.ndarray) -> np.ndarray:
    """(bx, by) evaluated at each grid point: array (npts, 2)."""
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    bx = space.evaluate_function(rep.bx, grid)
    by = space.evaluate_function(rep.by, grid)
    return np.column_stack([bx, by])


# -- analytic 1D kernels -------------------------------------------------------


def kernel_1d(s: int, x: float):
    """Per-unit-length kernel K_s(x) of the metric between parallel lines."""
    ax = np.abs(x)
    if s == 1:
        return 0.5 * np.exp(-ax)
    if s == 2:
        return 0.25 * np.exp(-ax) * (1.0 + ax)
    raise ConfigurationError("kernel_1d supports s = 1 or 2")


def line_distance_per_unit_length(s: int, eps: float, sigma: float) -> float:
    """Distance per unit length between parallel lines separated by eps."""
    return float(np.sqrt(2.0 * (kernel_1d(s, 0.0) - kernel_1d(s, eps / sigma))))


# -- 2D Green's function -------------------------------------------------------

_EULER_GAMMA = 0.5772156649015329


def _bessel_k0(x):
    """Modified Bessel function K0 to relative error <= 1e-8 for x > 0.

    Ascending series below x = 5; above, the integral representation
    K0(x) = e^{-x} * int exp(-u^2) (x + u^2/2)^{-1/2} du / sqrt(2) evaluated
    by Gauss-Hermite quadrature, which converges fast once x is moderate.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ConfigurationError("K0 requires a positive argument")
    out = np.empty_like(x)
    small = x < 5.0
    if np.any(small):
        xs = x[small]
        q = 0.25 * xs * xs
        term_i = np.ones_like(xs)
        i0 = np.ones_like(xs)
        acc = np.zeros_like(xs)
        harmonic = 0.0
        for k in range(1, 40):
            term_i = term_i * q / (k * k)
            i0 += term_i
            harmonic += 1.0 / k
            acc += term_i * harmonic
        out[small] = -(np.log(0.5 * xs) + _EULER_GAMMA) * i0 + acc
    if np.any(~small):
        xl = x[~small]
        u, w = np.polynomial.hermite.hermgauss(64)
        pos = u > 0  # integrand is even; use symmetry
        u, w = u[pos], 2.0 * w[pos]
        vals = w[None, :] / np.sqrt(2.0 * (xl[:, None] + 0.5 * u[None, :] ** 2))
        out[~small] = np.exp(-xl) * vals.sum(axis=1)
    return out if out.ndim else float(out)


def greens_function_2d(r, sigma: float):
    """Green's function (2 pi sigma^2)^{-1} K0(r / sigma) of the s=1 metric."""
    r = np.asarray(r, dtype=float)
    val = _bessel_k0(r / sigma) / (2.0 * np.pi * sigma ** 2)
    return val if val.ndim else float(val)


# -- convergence helpers -------------------------------------------------------


def richardson(values, order: float) -> float:
    """Extrapolate a sequence computed at mesh sizes M, 2M, 4M, ... .

    Uses the last two entries: v* = v_fine + (v_fine - v_coarse)/(2^p - 1).
    """
    values = list(values)
    if len(values) < 2:
        raise ConfigurationError("need at least two values to extrapolate")
    v0, v1 = values[-2], values[-1]
    return v1 + (v1 - v0) / (2.0 ** order - 1.0)
