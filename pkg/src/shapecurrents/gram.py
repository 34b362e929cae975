"""Sobolev Gram operators G = Mass + sigma^2 * Stiffness and their solves."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import AssemblyError, ConfigurationError
from .space import FormSpace

DEFAULT_SIGMA = 1.0 / np.sqrt(10.0)


def _triangle_quadrature(n: int = 6):
    """Gauss points/weights on the unit triangle via a Duffy-collapsed square."""
    x, w = np.polynomial.legendre.leggauss(n)
    a = 0.5 * (x + 1.0)
    wa = 0.5 * w
    A, B = np.meshgrid(a, a, indexing="ij")
    WA, WB = np.meshgrid(wa, wa, indexing="ij")
    xi = A.ravel()
    eta = (B * (1.0 - A)).ravel()
    wq = (WA * WB * (1.0 - A)).ravel()
    return xi, eta, wq


def _element_matrices(space: FormSpace):
    """Mass/stiffness element matrices for the two triangle orientations."""
    mesh = space.mesh
    xi, eta, wq = _triangle_quadrature()
    lam = np.column_stack([1.0 - xi - eta, xi, eta])
    vals = space.basis.values(lam)  # (nq, nloc)
    dlam = space.basis.lambda_gradients(lam)  # (nq, nloc, 3)
    det = mesh.hx * mesh.hy
    out = []
    for cell in (0, 1):  # one lower, one upper triangle
        gl = space.lambda_xy_gradients(np.array([cell]))[0]  # (3, 2)
        gphys = dlam @ gl  # (nq, nloc, 2)
        Me = det * np.einsum("q,qi,qj->ij", wq, vals, vals)
        Ke = det * np.einsum("q,qid,qjd->ij", wq, gphys, gphys)
        out.append((Me, Ke))
    return out


def _assemble_lagrange(space: FormSpace):
    mesh = space.mesh
    dofs = space.cell_dofs()
    (Ml, Kl), (Mu, Ku) = _element_matrices(space)
    nloc = dofs.shape[1]
    rows = np.repeat(dofs, nloc, axis=1).ravel()
    cols = np.tile(dofs, (1, nloc)).ravel()
    n_sq = mesh.M * mesh.M
    mvals = np.empty((2 * n_sq, nloc, nloc))
    kvals = np.empty((2 * n_sq, nloc, nloc))
    mvals[0::2], mvals[1::2] = Ml, Mu
    kvals[0::2], kvals[1::2] = Kl, Ku
    n = space.dof_count
    mass = sp.coo_matrix((mvals.ravel(), (rows, cols)), shape=(n, n)).tocsc()
    stiff = sp.coo_matrix((kvals.ravel(), (rows, cols)), shape=(n, n)).tocsc()
    return mass, stiff


def _monomial_integrals(space: FormSpace):
    """Exact rectangle integrals int x^k dx up to the needed power."""
    x0, x1, y0, y1 = space.domain
    kmax = 2 * (space.N - 1) + 1
    ks = np.arange(kmax + 1)
    Ix = (x1 ** (ks + 1) - x0 ** (ks + 1)) / (ks + 1)
    Iy = (y1 ** (ks + 1) - y0 ** (ks + 1)) / (ks + 1)
    return Ix, Iy


def _assemble_monomial(space: FormSpace):
    Ix, Iy = _monomial_integrals(space)
    exps = np.array(space.exponents)
    m, n = exps[:, 0], exps[:, 1]
    M1, M2 = np.meshgrid(m, m, indexing="ij")
    N1, N2 = np.meshgrid(n, n, indexing="ij")
    mass = Ix[M1 + M2] * Iy[N1 + N2]
    stiff = np.zeros_like(mass)
    mask = (M1 > 0) & (M2 > 0)
    stiff[mask] = (M1 * M2)[mask] * Ix[(M1 + M2)[mask] - 2] * Iy[(N1 + N2)[mask]]
    mask = (N1 > 0) & (N2 > 0)
    stiff[mask] += (N1 * N2)[mask] * Ix[(M1 + M2)[mask]] * Iy[(N1 + N2)[mask] - 2]
    return mass, stiff


class GramOperator:
    """G = Mass + sigma^2 Stiffness for a form space, with cached factorizations."""

    def __init__(self, space: FormSpace, sigma: float = DEFAULT_SIGMA):
        if sigma <= 0:
            raise ConfigurationError("sigma must be positive")
        self.space = space
        self.sigma = float(sigma)
        if space.kind == "lagrange":
            self.mass, self.stiffness = _assemble_lagrange(space)
            self.G = (self.mass + sigma ** 2 * self.stiffness).tocsc()
            asym = abs(self.G - self.G.T).max()
            scale = abs(self.G).max()
            self._dense = False
        else:
            self.mass, self.stiffness = _assemble_monomial(space)
            self.G = self.mass + sigma ** 2 * self.stiffness
            asym = np.abs(self.G - self.G.T).max()
            scale = np.abs(self.G).max()
            self._dense = True
        if asym > 1e-12 * scale:
            raise AssemblyError(f"Gram matrix asymmetry {asym:.3e} exceeds tolerance")
        diag = self.G.diagonal()
        if np.any(diag <= 0):
            raise AssemblyError("Gram matrix has a non-positive diagonal entry")
        self._solver = None
        self._chol_G = None
        self._chol_mass = None

    # -- linear solves -------------------------------------------------------

    def _dense_solver(self, A: np.ndarray):
        d = 1.0 / np.sqrt(A.diagonal())
        chol = sla.cho_factor(A * np.outer(d, d), lower=True)
        return lambda f: d * sla.cho_solve(chol, d * f)

    def solve(self, f: np.ndarray) -> np.ndarray:
        """Solve G x = f."""
        f = np.asarray(f, dtype=float)
        if self._solver is None:
            if self._dense:
                self._solver = self._dense_solver(self.G)
            else:
                self._solver = spla.splu(self.G).solve
        return self._solver(f)

    def solve_power(self, f: np.ndarray, s: int) -> np.ndarray:
        """Apply the inverse of the order-s operator G (M^{-1} G)^{s-1}.

        Returns G^{-1} (M G^{-1})^{s-1} f: repeated Helmholtz solves with the
        mass matrix pairing the solutions back into the dual space (for s=2,
        "a second solve based on the mass matrix").
        """
        if s < 0 or s != int(s):
            raise ConfigurationError("s must be a non-negative integer")
        x = np.asarray(f, dtype=float)
        for i in range(int(s)):
            if i > 0:
                x = self.mass @ x
            x = self.solve(x)
        return x

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.G @ np.asarray(x, dtype=float)

    # -- whitening -------------------------------------------------------

    def _cholesky_factor(self, A, attr: str):
        """Lower-triangular C with A = C C^T (lazy; used only for whitening)."""
        if getattr(self, attr) is None:
            if self._dense:
                d = 1.0 / np.sqrt(A.diagonal())
                Le = sla.cholesky(A * np.outer(d, d), lower=True)
                setattr(self, attr, sp.csc_matrix(Le / d[:, None]))
            else:
                lu = spla.splu(A.tocsc(), permc_spec="NATURAL",
                               diag_pivot_thresh=0.0,
                               options={"SymmetricMode": True})
                n = A.shape[0]
                if (np.any(lu.perm_r != np.arange(n))
                        or np.any(lu.perm_c != np.arange(n))):
                    raise AssemblyError("pivoting occurred in symmetric factorization")
                dvals = lu.U.diagonal()
                if np.any(dvals <= 0):
                    raise AssemblyError("matrix is not positive definite")
                setattr(self, attr, (lu.L @ sp.diags(np.sqrt(dvals))).tocsc())
        return getattr(self, attr)

    def whiten(self, f: np.ndarray, s: int) -> np.ndarray:
        """Map a dual vector f to w with ||w||_2^2 = f^T solve_power(f, s).

        Odd s = 2k+1: w = C_G^{-1} (M G^{-1})^k f with G = C_G C_G^T.
        Even s = 2k: w = C_M^T G^{-1} (M G^{-1})^{k-1} f with M = C_M C_M^T.
        """
        if s < 1 or s != int(s):
            raise ConfigurationError("s must be a positive integer")
        s = int(s)
        x = np.asarray(f, dtype=float)
        if s % 2:
            for _ in range(s // 2):
                x = self.mass @ self.solve(x)
            C = self._cholesky_factor(self.G, "_chol_G")
            return spla.spsolve_triangular(C, x, lower=True)
        for i in range(s // 2):
            x = self.solve(x)
            if i < s // 2 - 1:
                x = self.mass @ x
        C = self._cholesky_factor(self.mass, "_chol_mass")
        return C.T @ x

    def dual_quadratic_form(self, f: np.ndarray, g: np.ndarray, s: int) -> float:
        """The H^{-s} pairing f^T solve_power(g, s)."""
        return float(np.dot(np.asarray(f, float), self.solve_power(g, s)))
