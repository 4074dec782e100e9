"""Cross-validation by an independent fixed-step RK4 integrator.

The value of the oracle rests on two properties: it converges at the
classical fourth order (so its own error is negligible at the step counts
used), and it shares no numerical machinery with the spectral solver.  Both
are tested here, along with end-to-end validation of solved curves.
"""

import inspect
import math

import numpy as np
import pytest

import capspec.oracle
from capspec import (
    IvpState,
    ProblemKind,
    ProblemSpec,
    SolverConfig,
    bary_eval,
    integrate,
    solve,
    validate,
)

PI = math.pi


def _endpoint(kind, start, s_end, kappa, steps):
    out = integrate(kind, IvpState(start.r, start.u, start.psi, start.s),
                    s_end, kappa, steps)
    return np.array([out.r, out.u, out.psi])


def test_rk4_is_fourth_order():
    # halving the step should cut the error by ~16; accept [8, 32]
    start = IvpState(1.0, 0.6, -0.4, 0.0)
    ref = _endpoint(ProblemKind.ANNULUS, start, 3.0, 9.0, 64000)
    err = [np.max(np.abs(_endpoint(ProblemKind.ANNULUS, start, 3.0, 9.0, n) - ref))
           for n in (1000, 2000)]
    assert err[0] > 1e-11  # well above rounding, so the ratio is meaningful
    factor = err[0] / err[1]
    assert 8.0 < factor < 32.0


def test_integrate_refuses_under_resolved_runs():
    with pytest.raises(ValueError):
        integrate(ProblemKind.PLANAR, IvpState(1.0, 0.0, 0.0), 1.0, 1.0, 100)


def test_ivp_state_rejects_non_finite():
    with pytest.raises(ValueError):
        IvpState(float("nan"), 0.0, 0.0)


def test_integrate_preserves_flat_interface():
    out = integrate(ProblemKind.ANNULUS, IvpState(1.0, 0.0, 0.0, 0.0),
                    2.0, 1.0, 2000)
    assert out.u == 0.0 and out.psi == 0.0
    assert abs(out.r - 3.0) < 1e-13


def test_validate_flat_solution_to_rounding():
    report = solve(ProblemSpec.annulus(1.0, 3.0, 0.0, 0.0))
    result = validate(ProblemSpec.annulus(1.0, 3.0, 0.0, 0.0), report)
    assert result.endpoint_error < 1e-13
    assert result.interior_max_error < 1e-13


def test_validate_annular_solution():
    spec = ProblemSpec.annulus(1.0, 3.0, -PI / 3, PI / 3)
    result = validate(spec, solve(spec))
    assert result.endpoint_error < 1e-6
    assert result.interior_max_error < 1e-6


def test_validate_disk_solution():
    spec = ProblemSpec.disk(1.0, PI / 2)
    result = validate(spec, solve(spec))
    assert result.endpoint_error < 1e-6
    assert result.interior_max_error < 1e-6


def test_oracle_disagreement_is_truncation_error():
    # the collocation residual is tiny on every accepted grid, but the
    # distance to the continuum curve is the spectral truncation error, and
    # the oracle must expose its decay as the grid is refined
    spec = ProblemSpec.annulus(1.0, 3.0, -PI / 2, PI / 2)
    coarse = validate(spec, solve(spec, SolverConfig(n0=15)))
    medium = validate(spec, solve(spec, SolverConfig(n0=31)))
    fine = validate(spec, solve(spec, SolverConfig(n0=45)))
    assert medium.interior_max_error < coarse.interior_max_error / 100.0
    assert fine.interior_max_error < 1e-13
    # the two finer solves bracket the same curve pointwise
    rep31 = solve(spec, SolverConfig(n0=31))
    rep45 = solve(spec, SolverConfig(n0=45))
    taus = np.linspace(-1.0, 1.0, 301)
    for field in ("r", "u", "psi"):
        c = bary_eval(rep31.grid, getattr(rep31.state, field), taus)
        f = bary_eval(rep45.grid, getattr(rep45.state, field), taus)
        assert np.max(np.abs(c - f)) < 1e-9, field


def test_oracle_shares_no_spectral_machinery():
    source = inspect.getsource(capspec.oracle)
    for name in ("diffmat", "jacobian", "residual", "newton", "lu_factor"):
        assert name not in source, name
