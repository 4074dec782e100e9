"""Chebyshev grids, barycentric interpolation, and rectangular collocation operators.

Nodes are Chebyshev points of the second kind (endpoints included), stored in
ascending order over [-1, 1].  They are generated in sine form rather than as
cos(j*pi/(n-1)) so that grids are exactly symmetric about the origin and an
odd-sized grid contains 0 exactly.

Derivatives are discretized in the rectangular collocation style: nodal values
on an n-point grid are mapped to values of the interpolant (order 0) or of its
derivative (order 1) on the coarser (n-1)-point grid.  The row deficit is what
makes room for boundary conditions in a square Newton system.

References: Trefethen, "Spectral Methods in MATLAB", SIAM 2000; Berrut &
Trefethen, "Barycentric Lagrange interpolation", SIAM Review 46 (2004);
Driscoll & Hale, "Rectangular spectral collocation", IMA J. Numer. Anal. 36
(2016).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["ChebGrid", "RectOp", "cheb_points", "bary_eval", "resample", "diffmat"]


@dataclass(frozen=True)
class ChebGrid:
    """An n-point second-kind Chebyshev grid with its barycentric weights."""

    n: int
    points: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class RectOp:
    """A dense rows x cols collocation operator (evaluation or differentiation)."""

    rows: int
    cols: int
    entries: np.ndarray

    def __matmul__(self, other):
        return self.entries @ other


def _grid(n: int) -> ChebGrid:
    """Build an n-point grid for any n >= 2 (internal; no minimum-size guard)."""
    if n < 2:
        raise ValueError(f"grid needs at least 2 points, got {n}")
    j = np.arange(n)
    # sine form of cos(pi*(n-1-j)/(n-1)): exactly antisymmetric, exact 0 for odd n
    points = np.sin(np.pi * (2 * j - (n - 1)) / (2 * (n - 1)))
    weights = np.where(j % 2 == 0, 1.0, -1.0)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    points.setflags(write=False)
    weights.setflags(write=False)
    return ChebGrid(n=n, points=points, weights=weights)


def cheb_points(n: int) -> ChebGrid:
    """Return the n-point second-kind Chebyshev grid on [-1, 1], ascending.

    Parameters
    ----------
    n : int
        Number of points, n >= 4.  (Smaller grids exist internally for the
        down-sampled equation grids but are not part of the public surface.)

    Returns
    -------
    ChebGrid
        Points x_j = sin(pi*(2j-(n-1))/(2(n-1))), j = 0..n-1, together with
        the barycentric weights (+-1 pattern, endpoints halved).
    """
    if n < 4:
        raise ValueError(f"cheb_points requires n >= 4, got {n}")
    return _grid(n)


@lru_cache(maxsize=256)
def _grid_cached(n: int) -> ChebGrid:
    return _grid(n)


def bary_eval(grid: ChebGrid, values: np.ndarray, queries) -> np.ndarray:
    """Evaluate the interpolant through (grid.points, values) at query points.

    Uses the second (true) barycentric formula, which reproduces nodal values
    exactly when a query coincides with a node.  Queries must lie in [-1, 1].
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n,):
        raise ValueError(f"expected {grid.n} nodal values, got shape {values.shape}")
    q = np.atleast_1d(np.asarray(queries, dtype=float))
    if q.size and (q.min() < -1.0 or q.max() > 1.0):
        raise ValueError("query points must lie in [-1, 1]")
    diff = q[:, None] - grid.points[None, :]
    hit_row, hit_col = np.nonzero(diff == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = grid.weights / diff
        out = (c @ values) / c.sum(axis=1)
    out[hit_row] = values[hit_col]
    return out


def resample(old_grid: ChebGrid, values: np.ndarray, new_grid: ChebGrid) -> np.ndarray:
    """Transfer nodal values from one grid to another by barycentric evaluation."""
    return bary_eval(old_grid, values, new_grid.points)


def _resample_matrix(src: ChebGrid, targets: np.ndarray) -> np.ndarray:
    """Dense matrix form of bary_eval: (len(targets) x src.n)."""
    diff = targets[:, None] - src.points[None, :]
    hit_row, hit_col = np.nonzero(diff == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = src.weights / diff
        mat = c / c.sum(axis=1)[:, None]
    mat[hit_row, :] = 0.0
    mat[hit_row, hit_col] = 1.0
    return mat


def _diffmat_square(grid: ChebGrid) -> np.ndarray:
    """Square differentiation matrix on grid, diagonal by negative row sums.

    Node differences are formed through the sine product identity
    sin a - sin b = 2 cos((a+b)/2) sin((a-b)/2), which loses less precision
    between nearby nodes than subtracting the points directly, and the
    persymmetry of the exact matrix is enforced by averaging with its
    half-turn rotation.
    """
    n, w = grid.n, grid.weights
    theta = np.pi * (2 * np.arange(n) - (n - 1)) / (2 * (n - 1))
    half_sum = 0.5 * (theta[:, None] + theta[None, :])
    half_diff = 0.5 * (theta[:, None] - theta[None, :])
    diff = 2.0 * np.cos(half_sum) * np.sin(half_diff)
    np.fill_diagonal(diff, 1.0)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    D = 0.5 * (D - D[::-1, ::-1])
    # the interpolant of a constant is constant, so rows must sum to zero
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


@lru_cache(maxsize=128)
def _rect_pair(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached (evaluation, differentiation) operators from n points to n-1 points."""
    src = _grid_cached(n)
    targets = _grid_cached(n - 1).points
    P0 = _resample_matrix(src, targets)
    # spread accumulated rounding so constants are reproduced/annihilated to
    # the last bit: order-0 rows must sum to 1, order-1 rows to 0
    P0 -= (P0.sum(axis=1) - 1.0)[:, None] / n
    D1 = P0 @ _diffmat_square(src)
    D1 -= D1.sum(axis=1)[:, None] / n
    P0.setflags(write=False)
    D1.setflags(write=False)
    return P0, D1


def diffmat(target_m: int, source_n: int, order: int) -> RectOp:
    """Rectangular collocation operator from an n-point to an (n-1)-point grid.

    Parameters
    ----------
    target_m : int
        Number of target rows; must equal source_n - 1.
    source_n : int
        Size of the source grid, >= 4.
    order : int
        0 for evaluation of the interpolant on the target grid, 1 for its
        first derivative there.

    Returns
    -------
    RectOp
        Dense (target_m x source_n) operator.  Order 0 rows sum to 1 and
        order 1 rows sum to 0 (constants are resolved exactly); both orders
        are exact on polynomials of degree < source_n.
    """
    if source_n < 4:
        raise ValueError(f"diffmat requires source_n >= 4, got {source_n}")
    if target_m != source_n - 1:
        raise ValueError(
            f"target grid must have source_n - 1 = {source_n - 1} points, got {target_m}"
        )
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order}")
    P0, D1 = _rect_pair(source_n)
    return RectOp(rows=target_m, cols=source_n, entries=P0 if order == 0 else D1)
