"""Newton iteration with safeguards, adaptive grid refinement, and continuation.

The inner loop is undamped Newton on the collocation system; angles that
stray past a threshold are clamped back to +-pi after every step.  The
outer loop watches for an oscillatory angle interpolant (more than one sign
change of its slope on a refined sampling grid), which signals a grid too
coarse to represent the solution: when a converged state oscillates, or
Newton fails on an oscillating iterate, the grid takes a large jump, and a
failed oscillating iterate additionally has its angle profile replaced by
the linear interpolant between the boundary angles before resampling.  All
other failures grow the grid by a fixed small increment.  Boundary angles
beyond pi/2 are reached by continuation: a short sequence of problems with
linearly spaced angles, each warm-started from the last.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve

from .chebcore import ChebGrid, _grid_cached, diffmat
from .guess import build_guess, flat_state
from .model import (Formulation, NonFiniteEvaluation, ProblemKind, ProblemSpec,
                    StateVector, boundary_targets, jacobian, residual,
                    select_formulation)

__all__ = [
    "SolverConfig",
    "SolveReport",
    "NewtonFailure",
    "BvpFailure",
    "newton_solve",
    "clamp_psi",
    "oscillation_reset",
    "adaptive_solve",
    "continuation_solve",
    "solve",
]

# slope differences below this relative floor carry no sign information:
# a resolved plateau rides on rounding-scale interpolation wiggle that must
# not masquerade as oscillation (resolved flat-band wiggle sits at ~1e-15
# relative; genuinely under-resolved states wiggle at 1e-12 and above)
_OSC_NOISE_FLOOR = 1e-13
_OSC_DENSITY = 0.12


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances, caps, and increments for the nested solve loops."""

    tol_newton: float = 1e-13
    tol_bvp: float = 1e-12
    n0: int = 15
    max_iter_newton: int = 30
    max_iter_bvp: int = 100
    newton_increment: int = 4
    continuation_steps: int = 10
    psi_clamp: float = 3.5
    n_max: int = 2001

    def __post_init__(self):
        if not 0 < self.tol_newton < 1 or not 0 < self.tol_bvp < 1:
            raise ValueError("tolerances must lie in (0, 1)")
        if self.n0 < 15 or self.n0 % 2 == 0:
            raise ValueError(f"n0 must be odd and >= 15, got {self.n0}")
        if self.newton_increment < 2 or self.newton_increment % 2:
            raise ValueError("newton_increment must be even (keeps n odd)")
        if self.max_iter_newton < 1 or self.max_iter_bvp < 1:
            raise ValueError("iteration caps must be positive")
        if self.continuation_steps < 2:
            raise ValueError("continuation needs at least 2 steps")
        if self.psi_clamp <= 0:
            raise ValueError("psi_clamp must be positive")
        if self.n_max < self.n0:
            raise ValueError("n_max must be at least n0")


@dataclass
class SolveReport:
    """Everything a converged solve produced, plus how it got there."""

    state: StateVector
    grid: ChebGrid
    newton_iterations: list[int]
    refinements: list[tuple[int, str]]
    res_newton_final: float
    res_bvp_final: float
    continuation_trace: list[tuple[float, float]]
    wall_time: float

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def total_newton_iterations(self) -> int:
        return sum(self.newton_iterations)


class NewtonFailure(Exception):
    """Newton did not converge on the current grid."""

    def __init__(self, reason: str, state: StateVector, iterations: int):
        super().__init__(f"newton failed: {reason} after {iterations} iterations")
        self.reason = reason  # max_iters | singular_matrix | nonfinite
        self.state = state
        self.iterations = iterations


class BvpFailure(Exception):
    """The outer adaptive loop gave up."""

    def __init__(self, reason: str, diagnostics: dict):
        super().__init__(f"solve failed: {reason}")
        self.reason = reason
        self.diagnostics = diagnostics


def clamp_psi(v: StateVector, cfg: SolverConfig) -> StateVector:
    """Reset angle entries beyond the clamp threshold to +-pi (strict inequality)."""
    mask = np.abs(v.psi) > cfg.psi_clamp
    if not mask.any():
        return v
    out = v.copy()
    out.psi[mask] = np.pi * np.sign(out.psi[mask])
    return out


def _oscillation_count(grid: ChebGrid, psi: np.ndarray) -> int:
    """Sign changes of the slope of Psi resampled to the (n-1)-point grid.

    The same down-sampling operator that carries the collocation rows is
    reused here.  Differences at or below a relative noise floor are
    dropped before counting (a zero or rounding-scale difference has no
    meaningful sign).
    """
    samples = diffmat(grid.n - 1, grid.n, 0) @ psi
    d = np.diff(samples)
    d = d[np.abs(d) > _OSC_NOISE_FLOOR * max(1.0, float(np.max(np.abs(samples))))]
    if d.size < 2:
        return 0
    return int(np.count_nonzero(np.diff(np.sign(d))))


def oscillation_reset(v: StateVector, grid: ChebGrid, spec: ProblemSpec,
                      cfg: SolverConfig, psi_a_t: float | None = None,
                      psi_b_t: float | None = None) -> tuple[StateVector, bool]:
    """Replace an oscillating angle profile by the linear boundary interpolant."""
    if _oscillation_count(grid, v.psi) < 2:
        return v, False
    _, _, pa, pb = boundary_targets(spec, psi_a_t, psi_b_t)
    out = v.copy()
    tau = grid.points
    out.psi[:] = 0.5 * (1.0 - tau) * pa + 0.5 * (1.0 + tau) * pb
    return out, True


def newton_solve(spec: ProblemSpec, form: Formulation, grid: ChebGrid,
                 v0: StateVector, cfg: SolverConfig,
                 psi_a_t: float | None = None,
                 psi_b_t: float | None = None) -> tuple[StateVector, int, float]:
    """Full-step Newton with the angle clamp; returns (state, iterations, res)."""
    v = v0.copy()
    res_newton = np.inf
    for it in range(1, cfg.max_iter_newton + 1):
        try:
            rhs = residual(spec, form, grid, v, psi_a_t, psi_b_t)
            J = jacobian(spec, form, grid, v)
        except NonFiniteEvaluation as exc:
            raise NewtonFailure("nonfinite", v, it - 1) from exc
        anorm = np.linalg.norm(J, 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # exact singularity warns; rcond catches it
            lu, piv = lu_factor(J, check_finite=False)
        rcond, info = lapack.dgecon(lu, anorm, norm="1")
        if info != 0 or not np.isfinite(rcond) or rcond < 1e-15:
            raise NewtonFailure("singular_matrix", v, it - 1)
        dv = lu_solve((lu, piv), rhs, check_finite=False)
        if not np.all(np.isfinite(dv)):
            raise NewtonFailure("nonfinite", v, it - 1)
        v = StateVector(v.flat - dv)
        res_newton = float(np.linalg.norm(dv) / np.linalg.norm(v.flat))
        v = clamp_psi(v, cfg)
        if res_newton <= cfg.tol_newton:
            return v, it, res_newton
    raise NewtonFailure("max_iters", v, cfg.max_iter_newton)


def _res_bvp(spec, form, grid, v, psi_a_t, psi_b_t) -> float:
    rhs = residual(spec, form, grid, v, psi_a_t, psi_b_t)
    return float(np.linalg.norm(rhs) / np.linalg.norm(v.flat))


def _next_odd(k: int) -> int:
    return k if k % 2 else k + 1


class _Accumulator:
    """Mutable bookkeeping shared by the outer loop across continuation steps."""

    def __init__(self):
        self.newton_iterations: list[int] = []
        self.refinements: list[tuple[int, str]] = []

    def diagnostics(self, spec, pa, pb, grid, res_bvp) -> dict:
        return {
            "kind": spec.kind.value,
            "psi_a_t": pa,
            "psi_b_t": pb,
            "n": grid.n,
            "res_bvp": res_bvp,
            "newton_iterations": list(self.newton_iterations),
            "refinements": list(self.refinements),
        }


def _refine_to_convergence(spec: ProblemSpec, form: Formulation, grid: ChebGrid,
                           v: StateVector, cfg: SolverConfig, acc: _Accumulator,
                           pa: float, pb: float, cold: bool = False):
    """Newton + grid growth until res_bvp passes; returns (v, grid, res_n, res_b)."""
    last_res_bvp = np.inf
    for _ in range(cfg.max_iter_bvp):
        failed = None
        res_newton = np.nan
        try:
            v, iters, res_newton = newton_solve(spec, form, grid, v, cfg, pa, pb)
            cold = False
            acc.newton_iterations.append(iters)
            last_res_bvp = _res_bvp(spec, form, grid, v, pa, pb)
            # an interpolant that rings across its sample intervals means the
            # grid cannot represent the solution yet, however small the
            # residual is; under-resolution flips the slope in a fixed
            # fraction of intervals at any n, while a resolved state carries
            # at most a few incidental flips, so the trigger is a flip
            # density (two flips at the base grid)
            count = _oscillation_count(grid, v.psi)
            oscillating = count > _OSC_DENSITY * (grid.n - 1)
            if last_res_bvp <= cfg.tol_bvp and not oscillating:
                return v, grid, res_newton, last_res_bvp
            trigger = "oscillation" if oscillating else "residual_fail"
        except NewtonFailure as nf:
            acc.newton_iterations.append(nf.iterations)
            if cold:
                # an arc-based start state can sit outside the Newton basin
                # on wide domains; the exact zero-angle solution is a better
                # restart than any amount of grid growth from a bad iterate
                cold = False
                v = flat_state(spec, grid)
                acc.refinements.append((grid.n, "flat_restart"))
                continue
            failed = nf.reason
            # a failed iterate that oscillates gets the linear angle
            # profile back before moving to the bigger grid
            v, oscillating = oscillation_reset(nf.state, grid, spec, cfg, pa, pb)
            trigger = "oscillation" if oscillating else "newton_fail"

        if trigger == "oscillation":
            new_n = _next_odd(grid.n + 2 * (grid.n - 1) - 1)
        else:
            new_n = grid.n + cfg.newton_increment
        if new_n > cfg.n_max:
            raise BvpFailure(
                "n_exceeded" if failed is None else f"n_exceeded({failed})",
                acc.diagnostics(spec, pa, pb, grid, last_res_bvp))
        new_grid = _grid_cached(new_n)
        v = v.resampled(grid, new_grid)
        grid = new_grid
        acc.refinements.append((new_n, trigger))
    raise BvpFailure("max_refinements",
                     acc.diagnostics(spec, pa, pb, grid, last_res_bvp))


def adaptive_solve(spec: ProblemSpec, psi_a_t: float, psi_b_t: float,
                   cfg: SolverConfig | None = None) -> SolveReport:
    """Cold-start solve at the given target angles, growing the grid as needed."""
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    form = select_formulation(spec)
    grid = _grid_cached(cfg.n0)
    acc = _Accumulator()

    if psi_b_t == 0 and (spec.kind is ProblemKind.DISK or psi_a_t == 0):
        v = flat_state(spec, grid)
        res_b = _res_bvp(spec, form, grid, v, psi_a_t, psi_b_t)
        return SolveReport(v, grid, [0], [], 0.0, res_b,
                           [(psi_a_t, psi_b_t)], time.perf_counter() - t0)

    v0 = build_guess(spec, grid, psi_a_t, psi_b_t)
    v, grid, res_n, res_b = _refine_to_convergence(
        spec, form, grid, v0, cfg, acc, psi_a_t, psi_b_t, cold=True)
    return SolveReport(v, grid, acc.newton_iterations, acc.refinements,
                       res_n, res_b, [(psi_a_t, psi_b_t)],
                       time.perf_counter() - t0)


def _schedule(angle: float, steps: int) -> np.ndarray:
    """Continuation path for one boundary angle: fixed, or capped then ramped."""
    if abs(angle) <= 0.5 * np.pi:
        return np.full(steps, angle)
    return np.linspace(np.sign(angle) * 0.5 * np.pi, angle, steps)


def continuation_solve(spec: ProblemSpec, cfg: SolverConfig | None = None) -> SolveReport:
    """Solve, ramping any boundary angle beyond pi/2 up in linear steps."""
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()

    if spec.kind is ProblemKind.DISK and spec.psi_b < 0:
        report = continuation_solve(replace(spec, psi_b=-spec.psi_b), cfg)
        _reflect_report(report)
        report.wall_time = time.perf_counter() - t0
        return report

    pa_final = 0.0 if spec.kind is ProblemKind.DISK else spec.psi_a
    pb_final = spec.psi_b
    if spec.kind is ProblemKind.DISK:
        needs = abs(pb_final) > 0.5 * np.pi
    else:
        needs = max(abs(pa_final), abs(pb_final)) > 0.5 * np.pi
    if not needs:
        return adaptive_solve(spec, pa_final, pb_final, cfg)

    pb_path = _schedule(pb_final, cfg.continuation_steps)
    if spec.kind is ProblemKind.DISK:
        pa_path = -pb_path  # disk left-boundary data mirror the right
    else:
        pa_path = _schedule(pa_final, cfg.continuation_steps)

    form = select_formulation(spec)
    acc = _Accumulator()
    trace: list[tuple[float, float]] = []
    v = None
    grid = _grid_cached(cfg.n0)
    res_n = res_b = np.nan
    for step, (pa, pb) in enumerate(zip(pa_path, pb_path)):
        pa, pb = float(pa), float(pb)
        trace.append((pa, pb))
        try:
            cold = v is None
            if cold:
                v = build_guess(spec, grid, pa, pb)
            v, grid, res_n, res_b = _refine_to_convergence(
                spec, form, grid, v, cfg, acc, pa, pb, cold=cold)
        except BvpFailure as bf:
            bf.diagnostics["continuation_step"] = step
            bf.diagnostics["trace"] = trace
            raise
    return SolveReport(v, grid, acc.newton_iterations, acc.refinements,
                       res_n, res_b, trace, time.perf_counter() - t0)


def _reflect_report(report: SolveReport):
    """Flip a report about the radial axis in place (heights and angles negate)."""
    np.negative(report.state.u, out=report.state.u)
    np.negative(report.state.psi, out=report.state.psi)
    report.continuation_trace = [(-pa, -pb) for pa, pb in report.continuation_trace]


def solve(spec: ProblemSpec, cfg: SolverConfig | None = None) -> SolveReport:
    """Front door: continuation when needed, plain adaptive solve otherwise."""
    return continuation_solve(spec, cfg)
