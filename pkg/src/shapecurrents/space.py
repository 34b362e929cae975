"""Test-form spaces: Lagrange elements on a structured mesh, or global monomials.

A 1-form basis element is w_i dx or w_i dy; only the scalar coefficient
functions w_i are represented here.  Dof numbering is deterministic:
Lagrange dofs are the uniform (d*M+1)^2 node lattice in row-major order,
monomial dofs are (m, n) exponent pairs sorted by total degree then by n.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ConfigurationError
from .mesh import DEFAULT_DOMAIN, StructuredMesh

MAX_LAGRANGE_DEGREE = 4


def _lagrange_1d_polys(degree: int):
    """Coefficients of P_m(t) = prod_{r<m} (d*t - r)/(m - r) for m = 0..degree."""
    polys = []
    for m in range(degree + 1):
        p = np.polynomial.Polynomial([1.0])
        for r in range(m):
            p = p * np.polynomial.Polynomial([-r / (m - r), degree / (m - r)])
        polys.append(p)
    return polys


def _barycentric_nodes(degree: int):
    """Multi-indices (a, b, c), a+b+c = degree, in deterministic order."""
    nodes = []
    for b in range(degree + 1):
        for c in range(degree + 1 - b):
            nodes.append((degree - b - c, b, c))
    return nodes


class LagrangeBasis:
    """Nodal Lagrange basis of a given degree on a reference triangle."""

    def __init__(self, degree: int):
        self.degree = degree
        self.nodes = _barycentric_nodes(degree)
        self._polys = _lagrange_1d_polys(degree)
        self._dpolys = [p.deriv() for p in self._polys]

    @property
    def n_local(self) -> int:
        return len(self.nodes)

    def values(self, lam: np.ndarray) -> np.ndarray:
        """Basis values at barycentric points lam (npts, 3) -> (npts, nloc)."""
        lam = np.atleast_2d(lam)
        P = np.stack([[p(lam[:, k]) for p in self._polys] for k in range(3)])
        out = np.empty((lam.shape[0], self.n_local))
        for idx, (a, b, c) in enumerate(self.nodes):
            out[:, idx] = P[0][a] * P[1][b] * P[2][c]
        return out

    def lambda_gradients(self, lam: np.ndarray) -> np.ndarray:
        """d(basis)/d(lambda_k), shape (npts, nloc, 3)."""
        lam = np.atleast_2d(lam)
        P = np.stack([[p(lam[:, k]) for p in self._polys] for k in range(3)])
        D = np.stack([[p(lam[:, k]) for p in self._dpolys] for k in range(3)])
        out = np.empty((lam.shape[0], self.n_local, 3))
        for idx, (a, b, c) in enumerate(self.nodes):
            out[:, idx, 0] = D[0][a] * P[1][b] * P[2][c]
            out[:, idx, 1] = P[0][a] * D[1][b] * P[2][c]
            out[:, idx, 2] = P[0][a] * P[1][b] * D[2][c]
        return out


class FormSpace:
    """Scalar coefficient space for test 1-forms."""

    def __init__(self, kind: str, mesh: StructuredMesh | None = None, degree: int = 1,
                 N: int = 0, domain=DEFAULT_DOMAIN):
        if kind == "lagrange":
            if mesh is None:
                raise ConfigurationError("lagrange space needs a mesh")
            if not 1 <= degree <= MAX_LAGRANGE_DEGREE:
                raise ConfigurationError(
                    f"lagrange degree must be in 1..{MAX_LAGRANGE_DEGREE}")
            self.mesh = mesh
            self.degree = degree
            self.domain = mesh.domain
            self.basis = LagrangeBasis(degree)
            self._nside = degree * mesh.M + 1
            self.dof_count = self._nside ** 2
            self._cell_dofs = None
        elif kind == "monomial":
            if N < 1:
                raise ConfigurationError("monomial space needs N >= 1")
            self.N = N
            x0, x1, y0, y1 = domain
            self.domain = (float(x0), float(x1), float(y0), float(y1))
            self.exponents = [(m, n) for deg in range(N) for n in range(deg + 1)
                              for m in [deg - n]]
            self.dof_count = len(self.exponents)
            self.mesh = None
        else:
            raise ConfigurationError(f"unknown space kind {kind!r}")
        self.kind = kind

    # -- descriptors ------------------------------------------------------

    def descriptor(self) -> dict:
        if self.kind == "lagrange":
            return {"kind": "lagrange", "M": self.mesh.M, "degree": self.degree,
                    "domain": list(self.domain)}
        return {"kind": "monomial", "N": self.N, "domain": list(self.domain)}

    def descriptor_json(self) -> str:
        return json.dumps(self.descriptor())

    def matches(self, other: "FormSpace") -> bool:
        return self.descriptor() == other.descriptor()

    # -- Lagrange geometry --------------------------------------------------

    def dof_coords(self) -> np.ndarray:
        if self.kind != "lagrange":
            raise ConfigurationError("dof coordinates exist only for Lagrange spaces")
        x0, x1, y0, y1 = self.domain
        xs = np.linspace(x0, x1, self._nside)
        ys = np.linspace(y0, y1, self._nside)
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.ravel(), Y.ravel()])

    def cell_dofs(self) -> np.ndarray:
        """Global dof index of each local node, per triangle: (n_cells, n_local)."""
        if self.kind != "lagrange":
            raise ConfigurationError("cell dofs exist only for Lagrange spaces")
        if self._cell_dofs is None:
            M, d = self.mesh.M, self.degree
            nodes = np.array(self.basis.nodes)  # (nloc, 3)
            b, c = nodes[:, 1], nodes[:, 2]
            ii, jj = np.meshgrid(np.arange(M), np.arange(M), indexing="ij")
            ii = ii.ravel()[:, None]
            jj = jj.ravel()[:, None]
            # lower: node at (j*d + b + c, i*d + c); upper: (j*d + b, i*d + b + c)
            low = (ii * d + c[None, :]) * self._nside + jj * d + (b + c)[None, :]
            up = (ii * d + (b + c)[None, :]) * self._nside + jj * d + b[None, :]
            out = np.empty((2 * M * M, len(b)), dtype=np.int64)
            out[0::2] = low
            out[1::2] = up
            self._cell_dofs = out
        return self._cell_dofs

    def barycentric(self, points: np.ndarray, cells: np.ndarray) -> np.ndarray:
        """Barycentric coordinates of points w.r.t. their containing triangles."""
        x0, _, y0, _ = self.domain
        mesh = self.mesh
        p = np.atleast_2d(points)
        cells = np.asarray(cells)
        u = (p[:, 0] - x0) / mesh.hx
        v = (p[:, 1] - y0) / mesh.hy
        q = cells // 2
        i, j = q // mesh.M, q % mesh.M
        uu, vv = u - j, v - i
        upper = cells % 2 == 1
        lam = np.empty((len(p), 3))
        lam[:, 0] = np.where(upper, 1.0 - vv, 1.0 - uu)
        lam[:, 1] = np.where(upper, uu, uu - vv)
        lam[:, 2] = np.where(upper, vv - uu, vv)
        return lam

    def lambda_xy_gradients(self, cells: np.ndarray) -> np.ndarray:
        """(npts, 3, 2) gradients of the barycentric coordinates in x, y."""
        hx, hy = self.mesh.hx, self.mesh.hy
        upper = np.asarray(cells) % 2 == 1
        g = np.empty((len(upper), 3, 2))
        # lower: grad lam = (-1/hx,0), (1/hx,-1/hy), (0,1/hy)
        # upper: (0,-1/hy), (1/hx,0), (-1/hx,1/hy)
        g[:, 0, 0] = np.where(upper, 0.0, -1.0 / hx)
        g[:, 0, 1] = np.where(upper, -1.0 / hy, 0.0)
        g[:, 1, 0] = 1.0 / hx
        g[:, 1, 1] = np.where(upper, 0.0, -1.0 / hy)
        g[:, 2, 0] = np.where(upper, -1.0 / hx, 0.0)
        g[:, 2, 1] = 1.0 / hy
        return g

    # -- basis evaluation ---------------------------------------------------

    def eval_basis(self, points: np.ndarray, cells: np.ndarray | None = None):
        """Basis values at points.

        Lagrange: returns (vals (npts, nloc), dofs (npts, nloc)); cells are
        located if not supplied.  Monomial: returns (vals (npts, ndof), None).
        """
        points = np.atleast_2d(points)
        if self.kind == "monomial":
            return self._vandermonde(points, 0), None
        if cells is None:
            cells = self.mesh.locate(points)
        lam = self.barycentric(points, cells)
        return self.basis.values(lam), self.cell_dofs()[cells]

    def eval_basis_grad(self, points: np.ndarray, cells: np.ndarray | None = None):
        """Basis x/y gradients at points: (grads (npts, nloc, 2), dofs or None)."""
        points = np.atleast_2d(points)
        if self.kind == "monomial":
            gx = self._vandermonde(points, 1)
            gy = self._vandermonde(points, 2)
            return np.stack([gx, gy], axis=-1), None
        if cells is None:
            cells = self.mesh.locate(points)
        lam = self.barycentric(points, cells)
        dlam = self.basis.lambda_gradients(lam)  # (npts, nloc, 3)
        gl = self.lambda_xy_gradients(cells)  # (npts, 3, 2)
        return np.einsum("pnk,pkd->pnd", dlam, gl), self.cell_dofs()[cells]

    def _vandermonde(self, points: np.ndarray, deriv: int) -> np.ndarray:
        x, y = points[:, 0], points[:, 1]
        cols = []
        for m, n in self.exponents:
            if deriv == 0:
                cols.append(x ** m * y ** n)
            elif deriv == 1:
                cols.append(m * x ** (m - 1) * y ** n if m > 0 else np.zeros_like(x))
            else:
                cols.append(n * x ** m * y ** (n - 1) if n > 0 else np.zeros_like(x))
        return np.column_stack(cols)

    def evaluate_function(self, coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Evaluate sum_i coeffs_i w_i at arbitrary points inside the domain."""
        points = np.atleast_2d(points)
        coeffs = np.asarray(coeffs, dtype=float)
        if self.kind == "monomial":
            return self._vandermonde(points, 0) @ coeffs
        vals, dofs = self.eval_basis(points)
        return np.sum(vals * coeffs[dofs], axis=1)


def build_mesh(M: int, domain=DEFAULT_DOMAIN) -> StructuredMesh:
    return StructuredMesh(M=M, domain=domain)


def build_space(kind: str, **params) -> FormSpace:
    if kind == "lagrange":
        mesh = params.get("mesh")
        if mesh is None:
            mesh = build_mesh(params["M"], params.get("domain", DEFAULT_DOMAIN))
        return FormSpace("lagrange", mesh=mesh, degree=params.get("degree", 1))
    if kind == "monomial":
        return FormSpace("monomial", N=params["N"],
                         domain=params.get("domain", DEFAULT_DOMAIN))
    raise ConfigurationError(f"unknown space kind {kind!r}")


def space_from_descriptor(desc) -> FormSpace:
    if isinstance(desc, str):
        desc = json.loads(desc)
    kind = desc.get("kind")
    domain = tuple(desc.get("domain", DEFAULT_DOMAIN))
    if kind == "lagrange":
        return build_space("lagrange", M=desc["M"], degree=desc.get("degree", 1),
                           domain=domain)
    if kind == "monomial":
        return build_space("monomial", N=desc["N"], domain=domain)
    raise ConfigurationError(f"unknown space kind {kind!r}")
