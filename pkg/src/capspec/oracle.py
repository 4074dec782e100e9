"""Independent check of converged solutions by classical Runge-Kutta.

The spectral solver and this module share nothing but barycentric sampling of
the candidate: the generating-curve equations are integrated here as a plain
initial-value problem in physical arclength with fixed-step fourth-order
Runge-Kutta, then compared against the spectral interpolant at interior
checkpoints and at the far boundary.  Agreement to many digits between two
unrelated discretizations is strong evidence that both are right.

The axisymmetric slope equation divides by the radius, so validation of the
disk problem starts a short way off the axis, where the equation is regular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .chebcore import bary_eval
from .model import ProblemKind, ProblemSpec

if TYPE_CHECKING:  # pragma: no cover - type-only import keeps the module standalone
    from .solver import SolveReport

__all__ = [
    "IvpState",
    "IntegrationFailure",
    "ValidationResult",
    "integrate",
    "validate",
]

# validation compares this many interior checkpoints (plus the endpoint)
_CHECKPOINT_COUNT = 20

# below this many steps per segment the integrator refuses to run: the point
# of the oracle is to be so over-resolved that its own error is negligible
_MIN_STEPS = 1000


class IntegrationFailure(ArithmeticError):
    """The initial-value integration produced a non-finite state."""


def _nudge(value: float, err: float, increment: float) -> tuple[float, float]:
    """One compensated (Kahan) addition: returns the new value and carry."""
    y = increment - err
    t = value + y
    return t, (t - value) - y


@dataclass
class IvpState:
    """Pointwise curve state for the initial-value integrator.

    ``r`` is the radius for the axisymmetric problems and the horizontal
    coordinate for the planar one; ``s`` is physical arclength.
    """

    r: float
    u: float
    psi: float
    s: float = 0.0

    def __post_init__(self):
        for name in ("r", "u", "psi", "s"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class ValidationResult:
    """Max-norm disagreement between the re-integration and the candidate."""

    endpoint_error: float
    interior_max_error: float


def integrate(kind: ProblemKind, start: IvpState, s_end: float, kappa: float,
              step_count: int) -> IvpState:
    """Advance the curve equations from ``start.s`` to ``s_end`` by classical RK4.

    The slope of the inclination angle is ``kappa*u - sin(psi)/r`` for the
    axisymmetric problems and ``kappa*u`` for the planar one, so for the
    former the caller must keep the path bounded away from the axis.  Plain
    Python floats throughout: no shared machinery with the spectral side.
    """
    if step_count < _MIN_STEPS:
        raise ValueError(f"step_count must be at least {_MIN_STEPS}, got {step_count}")
    planar = kind is ProblemKind.PLANAR
    h = (s_end - start.s) / step_count
    r, u, psi = start.r, start.u, start.psi
    er = eu = ep = 0.0

    def slope(r: float, u: float, psi: float) -> tuple[float, float, float]:
        dpsi = kappa * u if planar else kappa * u - math.sin(psi) / r
        return math.cos(psi), math.sin(psi), dpsi

    for i in range(step_count):
        r1, u1, p1 = slope(r, u, psi)
        r2, u2, p2 = slope(r + 0.5 * h * r1, u + 0.5 * h * u1, psi + 0.5 * h * p1)
        r3, u3, p3 = slope(r + 0.5 * h * r2, u + 0.5 * h * u2, psi + 0.5 * h * p2)
        r4, u4, p4 = slope(r + h * r3, u + h * u3, psi + h * p3)
        # compensated accumulation: tens of thousands of tiny increments must
        # not random-walk the state at the rounding level
        r, er = _nudge(r, er, h * (r1 + 2.0 * r2 + 2.0 * r3 + r4) / 6.0)
        u, eu = _nudge(u, eu, h * (u1 + 2.0 * u2 + 2.0 * u3 + u4) / 6.0)
        psi, ep = _nudge(psi, ep, h * (p1 + 2.0 * p2 + 2.0 * p3 + p4) / 6.0)
        if not (math.isfinite(r) and math.isfinite(u) and math.isfinite(psi)):
            raise IntegrationFailure(
                f"non-finite state after step {i + 1}/{step_count} at "
                f"s={start.s + (i + 1) * h:.6g}: r={r}, u={u}, psi={psi}")
    return IvpState(r, u, psi, s_end)


def validate(spec: ProblemSpec, report: "SolveReport",
             step_count: int = 20000) -> ValidationResult:
    """Re-integrate a converged solution and measure the disagreement.

    The march starts from the candidate's left boundary state (for the disk,
    from a point just off the axis at one tenth of the scaled arclength) and
    proceeds to the right boundary, comparing radius, height, and angle at
    twenty interior checkpoints and at the far end.  ``step_count`` is the
    total step budget, split evenly across the checkpoint segments but never
    below the integrator's per-call floor.
    """
    grid, v = report.grid, report.state
    ell = v.ell
    tau0 = 0.1 if spec.kind is ProblemKind.DISK else -1.0
    taus = np.linspace(tau0, 1.0, _CHECKPOINT_COUNT + 2)
    r_ref = bary_eval(grid, v.r, taus)
    u_ref = bary_eval(grid, v.u, taus)
    psi_ref = bary_eval(grid, v.psi, taus)

    seg_steps = max(_MIN_STEPS, step_count // (taus.size - 1))
    state = IvpState(float(r_ref[0]), float(u_ref[0]), float(psi_ref[0]),
                     ell * (tau0 + 1.0))
    errors = []
    for j in range(1, taus.size):
        state = integrate(spec.kind, state, ell * (float(taus[j]) + 1.0),
                          spec.kappa, seg_steps)
        errors.append(max(abs(state.r - float(r_ref[j])),
                          abs(state.u - float(u_ref[j])),
                          abs(state.psi - float(psi_ref[j]))))
    return ValidationResult(endpoint_error=errors[-1],
                            interior_max_error=max(errors[:-1]))
