"""Grid, interpolation, and rectangular-operator properties.

Everything here is checkable against polynomial identities: barycentric
interpolation and the collocation operators must be exact (to rounding) on
polynomials up to the grid degree, and the operator rows must reproduce or
annihilate constants to the last bit.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capspec import bary_eval, cheb_points, diffmat, resample


def test_grid_points_ascending_symmetric():
    for n in (4, 5, 15, 16, 43):
        g = cheb_points(n)
        assert g.n == n
        assert g.points.shape == (n,)
        assert g.points[0] == -1.0 and g.points[-1] == 1.0
        assert np.all(np.diff(g.points) > 0)
        np.testing.assert_allclose(g.points + g.points[::-1], 0.0, atol=1e-16)


def test_grid_rejects_tiny_n():
    with pytest.raises(ValueError):
        cheb_points(3)


def test_grid_odd_n_contains_origin():
    g = cheb_points(15)
    assert g.points[7] == 0.0


def test_bary_eval_reproduces_nodal_values():
    g = cheb_points(12)
    vals = np.sin(3.0 * g.points)
    out = bary_eval(g, vals, g.points)
    np.testing.assert_array_equal(out, vals)


def test_bary_eval_polynomial_exact():
    rng = np.random.default_rng(7)
    g = cheb_points(14)
    coeffs = rng.standard_normal(14)  # degree 13 = n - 1
    vals = np.polyval(coeffs, g.points)
    q = np.linspace(-1.0, 1.0, 211)
    np.testing.assert_allclose(bary_eval(g, vals, q), np.polyval(coeffs, q),
                               rtol=0, atol=1e-11)


def test_bary_eval_rejects_out_of_range():
    g = cheb_points(8)
    with pytest.raises(ValueError):
        bary_eval(g, np.zeros(8), [1.5])
    with pytest.raises(ValueError):
        bary_eval(g, np.zeros(4), [0.0])


def test_resample_polynomial_exact():
    src, dst = cheb_points(17), cheb_points(29)
    coeffs = np.array([0.3, -1.2, 0.5, 2.0, -0.7])
    vals = np.polyval(coeffs, src.points)
    np.testing.assert_allclose(resample(src, vals, dst),
                               np.polyval(coeffs, dst.points),
                               rtol=0, atol=1e-13)


def test_diffmat_contract_errors():
    with pytest.raises(ValueError):
        diffmat(10, 10, 1)  # target must be source - 1
    with pytest.raises(ValueError):
        diffmat(2, 3, 0)  # source too small
    with pytest.raises(ValueError):
        diffmat(9, 10, 2)  # only orders 0 and 1 exist


@given(st.integers(min_value=4, max_value=60))
@settings(max_examples=25, deadline=None)
def test_diffmat_row_sums(n):
    P0 = diffmat(n - 1, n, 0)
    D1 = diffmat(n - 1, n, 1)
    assert P0.rows == n - 1 and P0.cols == n
    # constants reproduced / annihilated to rounding relative to row magnitude
    np.testing.assert_allclose(P0.entries.sum(axis=1), 1.0, rtol=0,
                               atol=1e-13 * n)
    d1_scale = np.max(np.abs(D1.entries))
    np.testing.assert_allclose(D1.entries.sum(axis=1), 0.0, rtol=0,
                               atol=1e-14 * n * d1_scale)


def test_diffmat_polynomial_exact():
    n = 16
    g = cheb_points(n)
    t = cheb_points(n - 1).points
    P0, D1 = diffmat(n - 1, n, 0), diffmat(n - 1, n, 1)
    for k in range(n):  # degrees 0 .. n-1
        vals = g.points ** k
        np.testing.assert_allclose(P0 @ vals, t ** k, rtol=0, atol=2e-12,
                                   err_msg=f"evaluation, degree {k}")
        deriv = k * t ** (k - 1) if k else np.zeros_like(t)
        np.testing.assert_allclose(D1 @ vals, deriv, rtol=0, atol=5e-11,
                                   err_msg=f"derivative, degree {k}")


def test_diffmat_derivative_of_smooth_function():
    n = 40
    g = cheb_points(n)
    t = cheb_points(n - 1).points
    D1 = diffmat(n - 1, n, 1)
    np.testing.assert_allclose(D1 @ np.sin(2.0 * g.points),
                               2.0 * np.cos(2.0 * t), rtol=0, atol=1e-11)
