"""Problem definitions and the discretized capillary boundary-value systems.

A generating curve is parametrized by scaled arclength tau in [-1, 1] and
carried as nodal samples of the radius R (horizontal coordinate X in the
planar case), the height U, and the inclination angle Psi, plus the unknown
half-arclength ell.  The residual stacks the three first-order equations on
the down-sampled (n-1)-point grid and four boundary rows; the jacobian is the
exact Frechet derivative of that map, assembled blockwise from the
rectangular collocation operators.

Two equivalent axisymmetric formulations are provided: one divides by R
(large radii) and one multiplies through by R (small radii, where the curve
may pass near the axis).  The planar problem drops the 1/R curvature term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .chebcore import ChebGrid, bary_eval, diffmat

__all__ = [
    "ProblemKind",
    "Formulation",
    "ProblemSpec",
    "StateVector",
    "NonFiniteEvaluation",
    "select_formulation",
    "boundary_targets",
    "residual",
    "jacobian",
]


class ProblemKind(Enum):
    """The three interface configurations the solver handles."""

    DISK = "p1"  # radially symmetric graph over a disk, curve through the axis
    ANNULUS = "p2"  # radially symmetric, bounded away from the axis
    PLANAR = "p3"  # translationally invariant profile (no axial curvature term)


class Formulation(Enum):
    """Algebraic form of the inclination-angle equation."""

    DIVIDED = "divided"  # Psi' + ell sin(Psi)/R - kappa ell U
    MULTIPLIED = "multiplied"  # R Psi' + ell sin(Psi) - kappa ell R U
    PLANAR = "planar"  # Psi' - kappa ell U


class NonFiniteEvaluation(ArithmeticError):
    """Residual or jacobian evaluation produced NaN/Inf entries."""


@dataclass(frozen=True)
class ProblemSpec:
    """Immutable description of one boundary-value problem.

    For the disk problem the left boundary data are not free: the curve
    crosses the axis, so they are forced to (-b, -psi_b) and the ``a`` and
    ``psi_a`` fields are ignored.
    """

    kind: ProblemKind
    b: float
    psi_b: float
    a: float = 0.0
    psi_a: float = 0.0
    kappa: float = 1.0

    def __post_init__(self):
        for name in ("b", "psi_b", "a", "psi_a", "kappa"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if abs(self.psi_b) > math.pi:
            raise ValueError(f"|psi_b| must not exceed pi, got {self.psi_b}")
        if self.kind is ProblemKind.DISK:
            if self.b <= 0:
                raise ValueError(f"disk problem needs b > 0, got {self.b}")
        else:
            if abs(self.psi_a) > math.pi:
                raise ValueError(f"|psi_a| must not exceed pi, got {self.psi_a}")
            if not self.a < self.b:
                raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
            if self.kind is ProblemKind.ANNULUS and self.a <= 0:
                raise ValueError(f"annular problem needs a > 0, got {self.a}")

    @classmethod
    def disk(cls, b: float, psi_b: float, kappa: float = 1.0) -> "ProblemSpec":
        return cls(kind=ProblemKind.DISK, b=b, psi_b=psi_b, kappa=kappa)

    @classmethod
    def annulus(cls, a: float, b: float, psi_a: float, psi_b: float,
                kappa: float = 1.0) -> "ProblemSpec":
        return cls(kind=ProblemKind.ANNULUS, b=b, psi_b=psi_b, a=a,
                   psi_a=psi_a, kappa=kappa)

    @classmethod
    def planar(cls, a: float, b: float, psi_a: float, psi_b: float,
               kappa: float = 1.0) -> "ProblemSpec":
        return cls(kind=ProblemKind.PLANAR, b=b, psi_b=psi_b, a=a,
                   psi_a=psi_a, kappa=kappa)


def select_formulation(spec: ProblemSpec) -> Formulation:
    """Pick the angle-equation form: multiplied near the axis, divided away from it."""
    if spec.kind is ProblemKind.PLANAR:
        return Formulation.PLANAR
    pivot = spec.b if spec.kind is ProblemKind.DISK else spec.a
    return Formulation.MULTIPLIED if pivot <= 1.0 else Formulation.DIVIDED


def boundary_targets(spec: ProblemSpec, psi_a: float | None = None,
                     psi_b: float | None = None) -> tuple[float, float, float, float]:
    """Boundary data (r_left, r_right, psi_left, psi_right) for the four BC rows.

    Angle overrides support continuation, which solves a sequence of problems
    sharing the geometry but with intermediate boundary angles.
    """
    pb = spec.psi_b if psi_b is None else psi_b
    if spec.kind is ProblemKind.DISK:
        return -spec.b, spec.b, -pb, pb
    pa = spec.psi_a if psi_a is None else psi_a
    return spec.a, spec.b, pa, pb


class StateVector:
    """The stacked unknown [R; U; Psi; ell] on an n-point grid.

    The flat layout matches the block structure of the jacobian: indices
    0..n-1 hold R, n..2n-1 hold U, 2n..3n-1 hold Psi, and index 3n holds the
    half-arclength ell.  The r/u/psi accessors are views into the flat array,
    so in-place edits propagate.
    """

    __slots__ = ("flat",)

    def __init__(self, flat):
        flat = np.ascontiguousarray(flat, dtype=float)
        if flat.ndim != 1 or flat.size < 7 or (flat.size - 1) % 3:
            raise ValueError(f"flat state must have length 3n+1, got {flat.shape}")
        self.flat = flat

    @classmethod
    def from_parts(cls, r, u, psi, ell: float) -> "StateVector":
        r, u, psi = (np.asarray(p, dtype=float) for p in (r, u, psi))
        if not (r.shape == u.shape == psi.shape) or r.ndim != 1:
            raise ValueError("r, u, psi must be 1-d arrays of equal length")
        return cls(np.concatenate([r, u, psi, [float(ell)]]))

    @property
    def n(self) -> int:
        return (self.flat.size - 1) // 3

    @property
    def r(self) -> np.ndarray:
        """Radius nodal values (horizontal coordinate for the planar problem)."""
        return self.flat[: self.n]

    @property
    def u(self) -> np.ndarray:
        return self.flat[self.n : 2 * self.n]

    @property
    def psi(self) -> np.ndarray:
        return self.flat[2 * self.n : 3 * self.n]

    @property
    def ell(self) -> float:
        return float(self.flat[-1])

    @ell.setter
    def ell(self, value: float):
        self.flat[-1] = value

    def copy(self) -> "StateVector":
        return StateVector(self.flat.copy())

    def resampled(self, old_grid: ChebGrid, new_grid: ChebGrid) -> "StateVector":
        """Transfer the state to a new grid by barycentric interpolation."""
        if old_grid.n != self.n:
            raise ValueError(f"state has n={self.n} but old grid has n={old_grid.n}")
        return StateVector.from_parts(
            bary_eval(old_grid, self.r, new_grid.points),
            bary_eval(old_grid, self.u, new_grid.points),
            bary_eval(old_grid, self.psi, new_grid.points),
            self.ell,
        )


def _operators(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(D0, D1): evaluation and differentiation onto the (n-1)-point grid."""
    return diffmat(n - 1, n, 0).entries, diffmat(n - 1, n, 1).entries


def _check_shapes(grid: ChebGrid, v: StateVector):
    if v.n != grid.n:
        raise ValueError(f"state has n={v.n} but grid has n={grid.n}")
    if grid.n < 4:
        raise ValueError(f"grid too small: n={grid.n}")


def residual(spec: ProblemSpec, form: Formulation, grid: ChebGrid, v: StateVector,
             psi_a: float | None = None, psi_b: float | None = None) -> np.ndarray:
    """Nonlinear residual of length 3n+1: three equation blocks plus four BC rows."""
    _check_shapes(grid, v)
    D0, D1 = _operators(grid.n)
    r, u, psi, ell = v.r, v.u, v.psi, v.ell
    rd, ud, psid = D0 @ r, D0 @ u, D0 @ psi
    sin_psi, cos_psi = np.sin(psid), np.cos(psid)
    kl = spec.kappa * ell

    rows_r = D1 @ r - ell * cos_psi
    rows_u = D1 @ u - ell * sin_psi
    if form is Formulation.DIVIDED:
        rows_psi = D1 @ psi + ell * sin_psi / rd - kl * ud
    elif form is Formulation.MULTIPLIED:
        rows_psi = rd * (D1 @ psi) + ell * sin_psi - kl * rd * ud
    else:
        rows_psi = D1 @ psi - kl * ud

    ra, rb, pa, pb = boundary_targets(spec, psi_a, psi_b)
    bc = np.array([r[0] - ra, r[-1] - rb, psi[0] - pa, psi[-1] - pb])

    out = np.concatenate([rows_r, rows_u, rows_psi, bc])
    if not np.all(np.isfinite(out)):
        raise NonFiniteEvaluation("residual has non-finite entries")
    return out


def jacobian(spec: ProblemSpec, form: Formulation, grid: ChebGrid,
             v: StateVector) -> np.ndarray:
    """Frechet derivative of the residual: dense (3n+1) x (3n+1) block matrix."""
    _check_shapes(grid, v)
    n = grid.n
    m = n - 1
    D0, D1 = _operators(n)
    r, u, psi, ell = v.r, v.u, v.psi, v.ell
    rd, ud, psid = D0 @ r, D0 @ u, D0 @ psi
    sin_psi, cos_psi = np.sin(psid), np.cos(psid)
    kl = spec.kappa * ell

    J = np.zeros((3 * n + 1, 3 * n + 1))
    sr, su, sp = slice(0, m), slice(m, 2 * m), slice(2 * m, 3 * m)
    cr, cu, cp = slice(0, n), slice(n, 2 * n), slice(2 * n, 3 * n)

    J[sr, cr] = D1
    J[sr, cp] = (ell * sin_psi)[:, None] * D0
    J[sr, -1] = -cos_psi

    J[su, cu] = D1
    J[su, cp] = (-ell * cos_psi)[:, None] * D0
    J[su, -1] = -sin_psi

    if form is Formulation.DIVIDED:
        J[sp, cr] = (-ell * sin_psi / rd**2)[:, None] * D0
        J[sp, cu] = -kl * D0
        # exact derivative of ell*sin(Psi)/R needs the 1/R factor on the cos term
        J[sp, cp] = D1 + (ell * cos_psi / rd)[:, None] * D0
        J[sp, -1] = sin_psi / rd - spec.kappa * ud
    elif form is Formulation.MULTIPLIED:
        J[sp, cr] = (D1 @ psi - kl * ud)[:, None] * D0
        J[sp, cu] = (-kl * rd)[:, None] * D0
        J[sp, cp] = rd[:, None] * D1 + (ell * cos_psi)[:, None] * D0
        J[sp, -1] = sin_psi - spec.kappa * rd * ud
    else:
        J[sp, cu] = -kl * D0
        J[sp, cp] = D1
        J[sp, -1] = -spec.kappa * ud

    # unit boundary rows: R at each endpoint, then Psi at each endpoint
    J[3 * m, 0] = 1.0
    J[3 * m + 1, n - 1] = 1.0
    J[3 * m + 2, 2 * n] = 1.0
    J[3 * m + 3, 3 * n - 1] = 1.0

    if not np.all(np.isfinite(J)):
        raise NonFiniteEvaluation("jacobian has non-finite entries")
    return J
