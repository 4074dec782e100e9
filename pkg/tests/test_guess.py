"""Initial-state construction: exact flat states and circular-arc guesses.

The guesses only need to land inside the Newton basin, but they promise two
hard properties worth locking down: the flat state is an exact solution,
and every arc guess interpolates the boundary data it was built for.
"""

import math

import numpy as np
import pytest

from capspec import (
    ProblemKind,
    ProblemSpec,
    build_guess,
    cheb_points,
    flat_state,
    laplace_height,
    residual,
    select_formulation,
)
from capspec.guess import guess_p1

PI = math.pi


def test_flat_state_is_exact_for_zero_angles():
    grid = cheb_points(15)
    for spec in (ProblemSpec.disk(2.0, 0.0),
                 ProblemSpec.annulus(1.0, 3.0, 0.0, 0.0),
                 ProblemSpec.planar(0.5, 4.0, 0.0, 0.0)):
        v = flat_state(spec, grid)
        out = residual(spec, select_formulation(spec), grid, v)
        # scaled as the solver measures convergence: ||N(v)|| / ||v||
        assert np.linalg.norm(out) / np.linalg.norm(v.flat) < 1e-14, spec.kind
        assert np.max(np.abs(out)) < 1e-13, spec.kind


def test_flat_state_geometry():
    grid = cheb_points(9)
    disk = flat_state(ProblemSpec.disk(2.0, 0.0), grid)
    assert disk.ell == 2.0
    np.testing.assert_allclose(disk.r, 2.0 * grid.points, atol=0)
    ann = flat_state(ProblemSpec.annulus(1.0, 3.0, 0.0, 0.0), grid)
    assert ann.ell == 1.0
    assert ann.r[0] == 1.0 and ann.r[-1] == 3.0


def test_laplace_height_narrow_tube_asymptotics():
    # leading term 2*sin(psi_b)/(kappa*b) dominates as b -> 0
    for b in (1e-3, 1e-2):
        est = laplace_height(b, 3 * PI / 8, 1.0)
        lead = 2.0 * math.sin(3 * PI / 8) / b
        assert abs(est - lead) / lead < b
    assert abs(laplace_height(1.0, 0.0, 1.0)) < 1e-15  # flat wall, flat interface
    with pytest.raises(ValueError):
        laplace_height(-1.0, 0.5, 1.0)


@pytest.mark.parametrize("spec, pa, pb", [
    (ProblemSpec.disk(1.0, PI / 3), -PI / 3, PI / 3),
    (ProblemSpec.disk(5.0, 7 * PI / 8), -7 * PI / 8, 7 * PI / 8),
    (ProblemSpec.annulus(1.0, 3.0, -PI / 3, PI / 3), -PI / 3, PI / 3),      # u-shaped
    (ProblemSpec.annulus(1.0, 3.0, -PI / 6, -2 * PI / 3), -PI / 6, -2 * PI / 3),  # s-shaped
    (ProblemSpec.annulus(1.0, 10.0, -3 * PI / 8, -PI / 2), -3 * PI / 8, -PI / 2),
    (ProblemSpec.planar(1.0, 4.0, -PI / 2, PI / 2), -PI / 2, PI / 2),
], ids=["disk", "disk-wide", "ann-u", "ann-s", "ann-wide", "planar"])
def test_guess_interpolates_boundary_data(spec, pa, pb):
    grid = cheb_points(15)
    v = build_guess(spec, grid, pa, pb)
    assert np.all(np.isfinite(v.flat)) and v.ell > 0
    if spec.kind is ProblemKind.DISK:
        targets = (-spec.b, spec.b, pa, pb)
    else:
        targets = (spec.a, spec.b, pa, pb)
    assert abs(v.psi[0] - targets[2]) < 1e-12
    assert abs(v.psi[-1] - targets[3]) < 1e-12
    assert abs(v.r[-1] - targets[1]) < 1e-12
    if spec.kind is not ProblemKind.DISK:
        assert abs(v.r[0] - targets[0]) < 1e-12


def test_small_disk_guess_blends_tip_and_wall_radii():
    # below unit radius the arc radius mixes the tip and wall estimates, so
    # the outer endpoint is matched only approximately
    spec = ProblemSpec.disk(0.05, 3 * PI / 8)
    v = build_guess(spec, cheb_points(15), -3 * PI / 8, 3 * PI / 8)
    assert np.all(np.isfinite(v.flat))
    assert abs(v.r[-1] - spec.b) / spec.b < 0.5
    assert abs(v.psi[-1] - 3 * PI / 8) < 1e-12


def test_guess_reflection_is_exact():
    grid = cheb_points(15)
    spec_pos = ProblemSpec.annulus(1.0, 3.0, -PI / 6, 2 * PI / 3)
    spec_neg = ProblemSpec.annulus(1.0, 3.0, PI / 6, -2 * PI / 3)
    vp = build_guess(spec_pos, grid, -PI / 6, 2 * PI / 3)
    vn = build_guess(spec_neg, grid, PI / 6, -2 * PI / 3)
    np.testing.assert_array_equal(vn.r, vp.r)
    np.testing.assert_array_equal(vn.u, -vp.u)
    np.testing.assert_array_equal(vn.psi, -vp.psi)
    assert vn.ell == vp.ell


def test_disk_guess_rejects_degenerate_angle():
    spec = ProblemSpec.disk(1.0, 0.0)
    with pytest.raises(ValueError):
        guess_p1(spec, cheb_points(9), 0.0)
