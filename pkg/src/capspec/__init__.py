"""Capillary generating curves by Chebyshev pseudo-spectral collocation.

The package solves the boundary value problems for rotationally symmetric
and translationally invariant capillary interfaces whose generating curves
are parametrized by arc length: a disk-type interface meeting a boundary
cylinder, an annular interface between two cylinders, and the planar
analogue between two walls.  A Newton iteration on a Chebyshev collocation
discretization, wrapped in adaptive grid refinement and boundary-angle
continuation, produces spectrally accurate curves; an independent
Runge-Kutta integrator cross-checks converged solutions.

Typical use::

    from capspec import ProblemSpec, solve

    report = solve(ProblemSpec.annulus(1.0, 3.0, -0.5, 1.2))
    print(report.n, report.res_bvp_final)
    r, u, psi = report.state.r, report.state.u, report.state.psi
"""

from .chebcore import ChebGrid, RectOp, bary_eval, cheb_points, diffmat, resample
from .guess import build_guess, flat_state, laplace_height
from .model import (
    Formulation,
    NonFiniteEvaluation,
    ProblemKind,
    ProblemSpec,
    StateVector,
    boundary_targets,
    jacobian,
    residual,
    select_formulation,
)
from .oracle import (
    IntegrationFailure,
    IvpState,
    ValidationResult,
    integrate,
    validate,
)
from .solver import (
    BvpFailure,
    NewtonFailure,
    SolveReport,
    SolverConfig,
    adaptive_solve,
    clamp_psi,
    continuation_solve,
    newton_solve,
    oscillation_reset,
    solve,
)

__all__ = [
    "ChebGrid",
    "RectOp",
    "bary_eval",
    "cheb_points",
    "diffmat",
    "resample",
    "build_guess",
    "flat_state",
    "laplace_height",
    "Formulation",
    "NonFiniteEvaluation",
    "ProblemKind",
    "ProblemSpec",
    "StateVector",
    "boundary_targets",
    "jacobian",
    "residual",
    "select_formulation",
    "IntegrationFailure",
    "IvpState",
    "ValidationResult",
    "integrate",
    "validate",
    "BvpFailure",
    "NewtonFailure",
    "SolveReport",
    "SolverConfig",
    "adaptive_solve",
    "clamp_psi",
    "continuation_solve",
    "newton_solve",
    "oscillation_reset",
    "solve",
]

__version__ = "0.1.0"
