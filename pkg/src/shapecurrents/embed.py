"""Population embeddings: PCA on whitened currents and stress-minimizing MDS."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import pdist, squareform

from .currents import evaluate_current
from .curve import (FourierCoeffs, SampledCurve, fourier_shape,
                    random_fourier_coeffs, supercircle)
from .errors import ConfigurationError
from .gram import GramOperator
from .metric import whiten
from .space import FormSpace


@dataclass
class ShapeDataset:
    """Shapes as whitened current rows; Euclidean row distance = dual norm."""

    labels: list
    whitened: np.ndarray
    tags: list | None = None

    def distance_matrix(self) -> np.ndarray:
        return squareform(pdist(self.whitened))


@dataclass
class Embedding:
    coords: np.ndarray
    stress: float
    method: str
    mean_abs_error: float = np.nan
    explained_variance: np.ndarray = field(default=None)


def build_dataset(curves, space: FormSpace, G: GramOperator, s: int = 1,
                  rule: str = "midpoint", labels=None, tags=None) -> ShapeDataset:
    rows = [whiten(evaluate_current(c, space, rule), G, s) for c in curves]
    if labels is None:
        labels = [str(i) for i in range(len(curves))]
    return ShapeDataset(labels=list(labels), whitened=np.array(rows), tags=tags)


def _stress(dist: np.ndarray, coords: np.ndarray) -> float:
    d = squareform(pdist(coords))
    iu = np.triu_indices_from(dist, k=1)
    return float(np.sum((dist[iu] - d[iu]) ** 2))


def pca(dataset: ShapeDataset, k: int = 2) -> Embedding:
    """Project onto the top-k principal directions of the whitened rows.

    Sign convention: within each component the largest-magnitude loading is
    made positive, so the embedding is deterministic.
    """
    X = np.asarray(dataset.whitened, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise ConfigurationError("PCA needs at least two shapes")
    if k > min(n, X.shape[1]):
        raise ConfigurationError("k exceeds the available dimensions")
    Xc = X - X.mean(axis=0)
    U, S, Vt = np.linalg.svd(Xc, full_matrices=False)
    coords = U[:, :k] * S[:k]
    for j in range(k):
        lead = np.argmax(np.abs(Vt[j]))
        if Vt[j, lead] < 0:
            coords[:, j] = -coords[:, j]
    var = S ** 2 / max(n - 1, 1)
    dist = dataset.distance_matrix()
    return Embedding(coords=coords, stress=_stress(dist, coords), method="PCA",
                     mean_abs_error=_mean_abs_error(dist, coords),
                     explained_variance=var[:k])


def _mean_abs_error(dist: np.ndarray, coords: np.ndarray) -> float:
    d = squareform(pdist(coords))
    iu = np.triu_indices_from(dist, k=1)
    return float(np.mean(np.abs(dist[iu] - d[iu])))


def mds_stress(dist: np.ndarray, init: Embedding, max_iters: int = 500,
               tol: float = 1e-10) -> Embedding:
    """Minimize sum (d_ij - |y_i - y_j|)^2 by Gauss-Newton with step halving."""
    dist = np.asarray(dist, dtype=float)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ConfigurationError("distance matrix must be square")
    if not np.allclose(dist, dist.T, atol=1e-12 * (1 + np.abs(dist).max())):
        raise ConfigurationError("distance matrix must be symmetric")
    if np.any(np.abs(np.diag(dist)) > 1e-12):
        raise ConfigurationError("distance matrix must have a zero diagonal")
    n = dist.shape[0]
    Y = np.array(init.coords, dtype=float)
    k = Y.shape[1]
    ii, jj = np.triu_indices(n, k=1)
    target = dist[ii, jj]

    def residuals(Yf):
        diff = Yf[ii] - Yf[jj]
        norms = np.linalg.norm(diff, axis=1)
        return target - norms, diff, norms

    r, diff, norms = residuals(Y)
    stress = float(r @ r)
    for _ in range(max_iters):
        safe = np.where(norms > 1e-14, norms, 1.0)
        unit = diff / safe[:, None]
        # d r_p / d Y = -unit on row i, +unit on row j
        J = np.zeros((len(r), n * k))
        rows = np.arange(len(r))
        for d in range(k):
            J[rows, ii * k + d] = -unit[:, d]
            J[rows, jj * k + d] = unit[:, d]
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        step = step.reshape(n, k)
        t = 1.0
        new_stress = stress
        for _ in range(30):
            cand = Y + t * step
            rc, dc, nc = residuals(cand)
            new_stress = float(rc @ rc)
            if new_stress <= stress:
                Y, r, diff, norms = cand, rc, dc, nc
                break
            t *= 0.5
        if new_stress > stress or stress - new_stress <= tol * max(stress, 1e-300):
            stress = min(stress, new_stress)
            break
        stress = new_stress
    return Embedding(coords=Y, stress=stress, method="MDS",
                     mean_abs_error=_mean_abs_error(dist, Y))


def class_separation(embedding: Embedding, tags) -> dict:
    """Pairwise linear-separator accuracies on the 2D embedding coordinates."""
    tags = list(tags)
    coords = np.asarray(embedding.coords, dtype=float)
    classes = sorted(set(tags))
    if len(classes) < 2:
        return {"pairs": {}, "min_accuracy": 1.0, "degenerate": True}
    pairs = {}
    for a in range(len(classes)):
        for b in range(a + 1, len(classes)):
            mask = [t in (classes[a], classes[b]) for t in tags]
            X = coords[mask]
            y = np.array([1.0 if t == classes[a] else -1.0
                          for t, m in zip(tags, mask) if m])
            pairs[f"{classes[a]}|{classes[b]}"] = _linear_accuracy(X, y)
    return {"pairs": pairs, "min_accuracy": min(pairs.values()),
            "degenerate": False}


def _linear_accuracy(X: np.ndarray, y: np.ndarray) -> float:
    """Best linear separator accuracy via an LP on the hinge slacks."""
    n, k = X.shape
    # variables: w (k), b, slack (n); minimize sum slack
    # s.t. y_i (w x_i + b) >= 1 - slack_i, slack >= 0
    A_ub = np.zeros((n, k + 1 + n))
    A_ub[:, :k] = -y[:, None] * X
    A_ub[:, k] = -y
    A_ub[:, k + 1:] = -np.eye(n)
    b_ub = -np.ones(n)
    c = np.concatenate([np.zeros(k + 1), np.ones(n)])
    bounds = [(-1e3, 1e3)] * (k + 1) + [(0, None)] * n
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        return 0.0
    w, b = res.x[:k], res.x[k]
    return float(np.mean(y * (X @ w + b) > 0))


# -- dataset generators --------------------------------------------------------


def random_shape_population(n_shapes: int = 32, n_points: int = 512,
                            seed: int = 0):
    """Seeded random Fourier shapes (labels are the shape indices)."""
    rng = np.random.default_rng(seed)
    curves = [fourier_shape(random_fourier_coeffs(rng), n_points)
              for _ in range(n_shapes)]
    return curves, [str(i) for i in range(n_shapes)]


def fish_family(n_shapes: int = 16, n_points: int = 512, seed: int = 3,
                amplitude: float = 0.2):
    """Shapes phi(t; a) = phi1(t) + a * phi2(t), a in [0, 1].

    phi1 is a random closed shape and phi2 a random perturbation field; the
    family depends linearly on a.
    """
    rng = np.random.default_rng(seed)
    base = random_fourier_coeffs(rng)
    pert = random_fourier_coeffs(rng)
    pert.coeffs[1] = 0.0  # keep the base winding coefficient
    curves, labels = [], []
    for a in np.linspace(0.0, 1.0, n_shapes):
        pts_base = fourier_shape(base, n_points).points
        pts_pert = fourier_shape(pert, n_points).points
        pts = pts_base + a * amplitude * pts_pert
        params = np.arange(n_points) / n_points
        curves.append(SampledCurve(params=params, points=pts, closed=True))
        labels.append(f"{a:.4f}")
    return curves, labels


def three_class_population(per_class: int = 10, n_points: int = 512,
                           seed: int = 5, offset: float = 0.05,
                           noise: float = 0.01):
    """Three classes sharing base coefficients, differing in the 3rd/4th.

    Class c applies a fixed complex offset of magnitude `offset` to the
    k = 3 and k = 4 coefficients; each shape adds complex noise of std
    `noise` to those same coefficients.
    """
    rng = np.random.default_rng(seed)
    base = random_fourier_coeffs(rng)
    angles = 2.0 * np.pi * np.arange(3) / 3.0
    offsets = [(offset * np.exp(1j * a), offset * np.exp(-1j * a)) for a in angles]
    curves, labels, tags = [], [], []
    for c in range(3):
        for m in range(per_class):
            coeffs = FourierCoeffs(dict(base.coeffs))
            d3 = offsets[c][0] + noise * (rng.standard_normal()
                                          + 1j * rng.standard_normal())
            d4 = offsets[c][1] + noise * (rng.standard_normal()
                                          + 1j * rng.standard_normal())
            coeffs.coeffs[3] += d3
            coeffs.coeffs[4] += d4
            curves.append(fourier_shape(coeffs, n_points))
            labels.append(f"c{c}_{m}")
            tags.append(c)
    return curves, labels, tags


def supercircle_family(n_shapes: int = 13, n_points: int = 512):
    """Supercircles with roundness exponent r = 2^j, j uniform in [-3, 3]."""
    exps = np.linspace(-3.0, 3.0, n_shapes)
    curves = [supercircle(2.0 ** j, n_points) for j in exps]
    return curves, [f"{j:.3f}" for j in exps]
