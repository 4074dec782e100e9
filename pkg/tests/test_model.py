"""Problem descriptions, residual assembly, and the exact linearization.

The load-bearing check is jacobian-versus-finite-difference agreement: the
Newton solver trusts the hand-assembled Fréchet derivative, so every block
of it is compared against central differences of the residual.
"""

import math

import numpy as np
import pytest

from capspec import (
    Formulation,
    NonFiniteEvaluation,
    ProblemKind,
    ProblemSpec,
    StateVector,
    boundary_targets,
    build_guess,
    cheb_points,
    flat_state,
    jacobian,
    residual,
    select_formulation,
)

PI = math.pi


# ---------------------------------------------------------------------------
# problem validation


def test_disk_constructor_and_kind():
    spec = ProblemSpec.disk(2.0, PI / 3)
    assert spec.kind is ProblemKind.DISK
    assert spec.b == 2.0 and spec.psi_b == PI / 3 and spec.kappa == 1.0


@pytest.mark.parametrize("bad", [
    lambda: ProblemSpec.disk(-2.0, PI / 2),
    lambda: ProblemSpec.disk(0.0, PI / 2),
    lambda: ProblemSpec.disk(1.0, 3.5),            # |psi_b| > pi
    lambda: ProblemSpec.disk(1.0, PI / 2, kappa=0.0),
    lambda: ProblemSpec.disk(float("nan"), PI / 2),
    lambda: ProblemSpec.annulus(0.0, 1.0, 0.1, 0.1),   # inner wall at the axis
    lambda: ProblemSpec.annulus(2.0, 1.0, 0.1, 0.1),   # a >= b
    lambda: ProblemSpec.annulus(1.0, 3.0, 4.0, 0.1),   # |psi_a| > pi
    lambda: ProblemSpec.planar(1.0, 1.0, 0.1, 0.1),    # a >= b
    lambda: ProblemSpec.planar(0.5, 1.0, 0.1, float("inf")),
])
def test_invalid_problems_rejected(bad):
    with pytest.raises(ValueError):
        bad()


def test_formulation_switch_tracks_pivot_radius():
    assert select_formulation(ProblemSpec.disk(0.5, 1.0)) is Formulation.MULTIPLIED
    assert select_formulation(ProblemSpec.disk(1.0, 1.0)) is Formulation.MULTIPLIED
    assert select_formulation(ProblemSpec.disk(1.5, 1.0)) is Formulation.DIVIDED
    assert select_formulation(ProblemSpec.annulus(0.1, 1.0, -1.0, 1.0)) is Formulation.MULTIPLIED
    assert select_formulation(ProblemSpec.annulus(2.0, 3.0, -1.0, 1.0)) is Formulation.DIVIDED
    assert select_formulation(ProblemSpec.planar(0.1, 1.0, -1.0, 1.0)) is Formulation.PLANAR


def test_boundary_targets_disk_is_odd_extension():
    spec = ProblemSpec.disk(2.0, 0.9)
    assert boundary_targets(spec) == (-2.0, 2.0, -0.9, 0.9)


def test_boundary_targets_annulus_and_overrides():
    spec = ProblemSpec.annulus(1.0, 3.0, -0.4, 0.8)
    assert boundary_targets(spec) == (1.0, 3.0, -0.4, 0.8)
    assert boundary_targets(spec, -0.1, 0.2) == (1.0, 3.0, -0.1, 0.2)


# ---------------------------------------------------------------------------
# state layout


def test_state_vector_views_share_storage():
    v = StateVector.from_parts([1.0, 2, 3], [4.0, 5, 6], [7.0, 8, 9], 1.5)
    assert v.n == 3 and v.flat.size == 10
    v.r[0] = -1.0
    v.ell = 2.5
    assert v.flat[0] == -1.0 and v.flat[-1] == 2.5
    w = v.copy()
    w.u[0] = 99.0
    assert v.u[0] == 4.0


def test_state_vector_rejects_bad_layout():
    with pytest.raises(ValueError):
        StateVector(np.zeros(9))  # 9 != 3n+1
    with pytest.raises(ValueError):
        StateVector.from_parts([1.0], [1.0, 2.0], [1.0], 0.1)


def test_state_resample_is_barycentric():
    old, new = cheb_points(9), cheb_points(17)
    v = StateVector.from_parts(old.points ** 2, np.sin(old.points),
                               old.points, 0.7)
    w = v.resampled(old, new)
    np.testing.assert_allclose(w.r, new.points ** 2, atol=1e-13)
    assert w.ell == 0.7


# ---------------------------------------------------------------------------
# residual assembly


def test_residual_shape_and_flat_exactness():
    spec = ProblemSpec.annulus(1.0, 3.0, 0.0, 0.0)
    grid = cheb_points(15)
    v = flat_state(spec, grid)
    out = residual(spec, select_formulation(spec), grid, v)
    assert out.shape == (3 * 15 + 1,)
    # scaled as the solver measures convergence: ||N(v)|| / ||v||
    assert np.linalg.norm(out) / np.linalg.norm(v.flat) < 1e-14


def test_residual_raises_on_non_finite_state():
    spec = ProblemSpec.annulus(1.0, 3.0, 0.0, 0.0)
    grid = cheb_points(15)
    v = flat_state(spec, grid)
    v.u[3] = float("nan")
    with pytest.raises(NonFiniteEvaluation):
        residual(spec, select_formulation(spec), grid, v)


def _fd_jacobian(spec, form, grid, v, h=1e-7):
    base = v.flat.copy()
    m = base.size
    out = np.empty((m, m))
    for j in range(m):
        step = h * max(1.0, abs(base[j]))
        plus, minus = base.copy(), base.copy()
        plus[j] += step
        minus[j] -= step
        fp = residual(spec, form, grid, StateVector(plus))
        fm = residual(spec, form, grid, StateVector(minus))
        out[:, j] = (fp - fm) / (2.0 * step)
    return out


@pytest.mark.parametrize("spec", [
    ProblemSpec.disk(1.0, PI / 3),                      # multiplied
    ProblemSpec.annulus(2.0, 4.0, -0.7, 1.1),           # divided
    ProblemSpec.annulus(0.5, 2.0, -1.0, 0.6),           # multiplied
    ProblemSpec.planar(1.0, 3.0, -1.2, 0.9),            # planar
], ids=["disk", "annulus-divided", "annulus-multiplied", "planar"])
def test_jacobian_matches_finite_differences(spec):
    grid = cheb_points(11)
    form = select_formulation(spec)
    v = build_guess(spec, grid, spec.psi_a if spec.kind is not ProblemKind.DISK
                    else -spec.psi_b, spec.psi_b)
    J = jacobian(spec, form, grid, v)
    J_fd = _fd_jacobian(spec, form, grid, v)
    scale = max(1.0, np.max(np.abs(J)))
    assert np.max(np.abs(J - J_fd)) / scale < 1e-6


def test_jacobian_boundary_rows_are_unit_picks():
    spec = ProblemSpec.annulus(1.0, 3.0, -0.5, 0.5)
    grid = cheb_points(9)
    v = build_guess(spec, grid, -0.5, 0.5)
    J = jacobian(spec, select_formulation(spec), grid, v)
    n = grid.n
    for row, col in zip(range(3 * n - 3, 3 * n + 1),
                        (0, n - 1, 2 * n, 3 * n - 1)):
        expected = np.zeros(3 * n + 1)
        expected[col] = 1.0
        np.testing.assert_array_equal(J[row], expected)
