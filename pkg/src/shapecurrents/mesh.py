"""Structured triangulation of a rectangle.

Each of the M x M squares is split along the lower-left to upper-right
diagonal.  Cell ids: square q = row*M + col holds triangles 2q (lower,
vertices (j,i),(j+1,i),(j+1,i+1)) and 2q+1 (upper, vertices
(j,i),(j+1,i+1),(j,i+1)); both are counterclockwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

DEFAULT_DOMAIN = (-1.0, 1.0, -1.0, 1.0)


@dataclass(frozen=True)
class StructuredMesh:
    M: int
    domain: tuple = DEFAULT_DOMAIN  # (x0, x1, y0, y1)

    def __post_init__(self):
        if self.M < 1:
            raise ConfigurationError("mesh must have at least 1 cell per side")
        x0, x1, y0, y1 = self.domain
        if not (x1 > x0 and y1 > y0):
            raise ConfigurationError("domain rectangle is degenerate")
        object.__setattr__(self, "domain", (float(x0), float(x1), float(y0), float(y1)))

    @property
    def hx(self) -> float:
        x0, x1, _, _ = self.domain
        return (x1 - x0) / self.M

    @property
    def hy(self) -> float:
        _, _, y0, y1 = self.domain
        return (y1 - y0) / self.M

    @property
    def n_cells(self) -> int:
        return 2 * self.M * self.M

    @property
    def n_vertices(self) -> int:
        return (self.M + 1) ** 2

    def vertex_coords(self) -> np.ndarray:
        x0, x1, y0, y1 = self.domain
        xs = np.linspace(x0, x1, self.M + 1)
        ys = np.linspace(y0, y1, self.M + 1)
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.ravel(), Y.ravel()])

    def cell_square(self, cell: int):
        """(row, col, upper) for a triangle id."""
        upper = cell % 2 == 1
        q = cell // 2
        return q // self.M, q % self.M, upper

    def cell_vertices(self, cell: int) -> np.ndarray:
        i, j, upper = self.cell_square(cell)
        x0, _, y0, _ = self.domain
        hx, hy = self.hx, self.hy
        a = (x0 + j * hx, y0 + i * hy)
        if upper:
            b = (x0 + (j + 1) * hx, y0 + (i + 1) * hy)
            c = (x0 + j * hx, y0 + (i + 1) * hy)
        else:
            b = (x0 + (j + 1) * hx, y0 + i * hy)
            c = (x0 + (j + 1) * hx, y0 + (i + 1) * hy)
        return np.array([a, b, c])

    def edge_neighbors(self, cell: int):
        """Triangle ids sharing an edge with `cell`; -1 where the edge is on the boundary.

        Order matches the edges (v0-v1, v1-v2, v2-v0) of cell_vertices.
        """
        M = self.M
        i, j, upper = self.cell_square(cell)
        q = i * M + j
        if upper:
            # edges: diagonal (v0-v1), top (v1-v2), left (v2-v0)
            diag = 2 * q
            top = 2 * ((i + 1) * M + j) if i + 1 < M else -1
            left = 2 * (i * M + j - 1) if j - 1 >= 0 else -1
            return (diag, top, left)
        # lower: edges bottom (v0-v1), right (v1-v2), diagonal (v2-v0)
        bottom = 2 * ((i - 1) * M + j) + 1 if i - 1 >= 0 else -1
        right = 2 * (i * M + j + 1) + 1 if j + 1 < M else -1
        diag = 2 * q + 1
        return (bottom, right, diag)

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        x0, x1, y0, y1 = self.domain
        p = np.asarray(points, dtype=float)
        return (
            (p[:, 0] >= x0 - tol)
            & (p[:, 0] <= x1 + tol)
            & (p[:, 1] >= y0 - tol)
            & (p[:, 1] <= y1 + tol)
        )

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Triangle id containing each point, with lower/left tie-breaking."""
        x0, _, y0, _ = self.domain
        p = np.asarray(points, dtype=float)
        u = (p[:, 0] - x0) / self.hx
        v = (p[:, 1] - y0) / self.hy
        return locate_cells(u, v, self.M)


def locate_cells(u: np.ndarray, v: np.ndarray, M: int, tol: float = 1e-12) -> np.ndarray:
    """Cell classification in grid units; points on edges go to the lower/left cell."""
    j = np.floor(u).astype(np.int64)
    on_line = (u - j) < tol
    j = np.where(on_line & (j > 0), j - 1, j)
    j = np.clip(j, 0, M - 1)
    i = np.floor(v).astype(np.int64)
    on_line = (v - i) < tol
    i = np.where(on_line & (i > 0), i - 1, i)
    i = np.clip(i, 0, M - 1)
    uu = u - j
    vv = v - i
    lower = vv <= uu + tol
    return 2 * (i * M + j) + np.where(lower, 0, 1)
