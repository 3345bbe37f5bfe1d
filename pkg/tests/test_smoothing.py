import numpy as np
import pytest

from secondchange.core.series import TimeSeries
from secondchange.smoothing.exception import (
    BandwidthError,
    DegenerateSegmentError,
    LocatorWindowError,
    SingularFitError,
)
from secondchange.smoothing.kernel import EPANECHNIKOV, get_kernel
from secondchange.smoothing.local_linear import (
    check_bandwidth,
    local_linear_fit,
    residuals,
    smoother_weights,
    variance_fit_piecewise,
    variance_fit_smooth,
)
from secondchange.smoothing.locator import default_locator_params, variance_break_locate
from tests.conftest import make_residuals


def _weighted_ls(grid, y, t, b, kernel):
    """Direct weighted least squares fit of a line around t."""
    w = kernel((grid - t) / b)
    X = np.column_stack([np.ones_like(grid), grid - t])
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(X * sw[:, None], y * sw, rcond=None)
    return coef


def _normal_equations(grid, y, t, b):
    """Solve the 2x2 weighted normal equations with explicit Epanechnikov weights."""
    d = grid - t
    w = np.where(np.abs(d / b) < 1.0, 0.75 * (1.0 - (d / b) ** 2), 0.0)
    lhs = np.array([[np.sum(w), np.sum(w * d)], [np.sum(w * d), np.sum(w * d * d)]])
    rhs = np.array([np.sum(w * y), np.sum(w * d * y)])
    return np.linalg.solve(lhs, rhs)


class TestKernel:
    def test_epanechnikov_moments(self):
        assert EPANECHNIKOV.mu(0) == pytest.approx(1.0, abs=1e-12)
        assert EPANECHNIKOV.mu(1) == pytest.approx(0.0, abs=1e-12)
        assert EPANECHNIKOV.mu(2) == pytest.approx(0.2, abs=1e-12)
        assert EPANECHNIKOV.phi(0) == pytest.approx(0.6, abs=1e-12)

    def test_biweight_moments(self):
        kernel = get_kernel("biweight")
        assert kernel.mu(0) == pytest.approx(1.0, abs=1e-12)
        assert kernel.mu(2) == pytest.approx(1 / 7, abs=1e-12)

    def test_outside_support(self):
        np.testing.assert_array_equal(EPANECHNIKOV(np.array([-1.5, 1.0, 2.0])), [0.0, 0.0, 0.0])

    def test_boundary_moment(self):
        assert EPANECHNIKOV.boundary_moment(0, 0.5, 0.1) == pytest.approx(1.0, abs=1e-12)
        assert EPANECHNIKOV.boundary_moment(0, 0.0, 0.1) == pytest.approx(0.5, abs=1e-12)
        assert EPANECHNIKOV.boundary_moment(1, 0.0, 0.1) == pytest.approx(3 / 16, abs=1e-12)


class TestLocalLinear:
    def test_affine_reproduced(self):
        n = 120
        t = np.arange(1, n + 1) / n
        fit = local_linear_fit(TimeSeries(2.0 + 3.0 * t), 0.1)
        np.testing.assert_allclose(fit.mu_hat, 2.0 + 3.0 * t, atol=1e-10)
        np.testing.assert_allclose(fit.mu_dot_hat, 3.0, atol=1e-8)

    def test_weight_moments(self):
        grid = np.arange(1, 51) / 50
        l0, l1 = smoother_weights(grid, grid, 0.2)
        d = grid[None, :] - grid[:, None]
        np.testing.assert_allclose(l0.sum(axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose((l0 * d).sum(axis=1), 0.0, atol=1e-12)
        np.testing.assert_allclose(l1.sum(axis=1), 0.0, atol=1e-9)
        np.testing.assert_allclose((l1 * d).sum(axis=1), 1.0, atol=1e-9)

    def test_matches_weighted_least_squares(self, rng):
        n = 12
        y = rng.normal(size=n)
        series = TimeSeries(y)
        fit = local_linear_fit(series, 0.3)
        for i, t in enumerate(series.grid):
            intercept, slope = _weighted_ls(series.grid, y, t, 0.3, EPANECHNIKOV)
            assert fit.mu_hat[i] == pytest.approx(intercept, abs=1e-10)
            assert fit.mu_dot_hat[i] == pytest.approx(slope, abs=1e-8)

    def test_seven_point_normal_equations(self):
        y = np.array([1.0, 0.0, 2.0, 1.0, 3.0, 0.0, 1.0])
        series = TimeSeries(y)
        fit = local_linear_fit(series, 0.5)
        for i, t in enumerate(series.grid):
            intercept, slope = _normal_equations(series.grid, y, t, 0.5)
            assert fit.mu_hat[i] == pytest.approx(intercept, abs=1e-12)
            assert fit.mu_dot_hat[i] == pytest.approx(slope, abs=1e-10)
        intercept, _ = _normal_equations(series.grid, y, 4 / 7, 0.5)
        assert fit.mu_hat[3] == pytest.approx(intercept, abs=1e-12)

    def test_residuals_affine_invariant(self, rng):
        n = 150
        y = rng.normal(size=n)
        t = np.arange(1, n + 1) / n
        plain = residuals(TimeSeries(y), local_linear_fit(TimeSeries(y), 0.15))
        shifted_series = TimeSeries(y + 4.0 - 2.5 * t)
        shifted = residuals(shifted_series, local_linear_fit(shifted_series, 0.15))
        np.testing.assert_allclose(plain.e_hat, shifted.e_hat, atol=1e-10)

    @pytest.mark.parametrize("b", [0.0, 0.6, 0.02])
    def test_bandwidth_checked(self, b):
        with pytest.raises(BandwidthError):
            check_bandwidth(100, b)

    def test_singular_fit_names_point(self):
        grid = np.arange(1, 21) / 20
        with pytest.raises(SingularFitError, match="t=5"):
            smoother_weights(grid, np.array([5.0]), 0.1)


class TestVarianceFits:
    def test_floor_applied(self):
        fit = variance_fit_smooth(make_residuals(np.zeros(60), series_variance=2.0), 0.2)
        assert fit.floor_applied
        assert fit.floor == pytest.approx(2e-8)
        np.testing.assert_array_equal(fit.sigma2_hat, 2e-8)

    def test_floor_for_constant_series(self):
        fit = variance_fit_smooth(make_residuals(np.zeros(60), series_variance=0.0), 0.2)
        assert fit.floor == pytest.approx(1e-8)

    def test_piecewise_without_break_is_smooth(self, rng):
        res = make_residuals(rng.normal(size=100))
        smooth = variance_fit_smooth(res, 0.2)
        piecewise = variance_fit_piecewise(res, 1.0, 0.2)
        np.testing.assert_array_equal(smooth.sigma2_hat, piecewise.sigma2_hat)
        assert piecewise.variant == "piecewise"

    def test_piecewise_reproduces_step(self):
        e = np.concatenate([np.ones(50), 2.0 * np.ones(50)])
        fit = variance_fit_piecewise(make_residuals(e), 0.5, 0.2)
        np.testing.assert_allclose(fit.sigma2_hat[:50], 1.0, atol=1e-10)
        np.testing.assert_allclose(fit.sigma2_hat[50:], 4.0, atol=1e-10)
        assert fit.break_index == 50

    def test_smooth_fit_oracle(self, rng):
        e = rng.normal(size=8)
        grid = np.arange(1, 9) / 8
        fit = variance_fit_smooth(make_residuals(e), 0.4)
        expected = [_normal_equations(grid, e ** 2, t, 0.4)[0] for t in grid]
        np.testing.assert_allclose(fit.sigma2_hat, np.maximum(expected, 1e-8), atol=1e-12)

    def test_piecewise_fit_oracle(self, rng):
        e = np.concatenate([rng.normal(size=8), 2.0 * rng.normal(size=8)])
        grid = np.arange(1, 17) / 16
        fit = variance_fit_piecewise(make_residuals(e), 0.5, 0.25)
        squared = e ** 2
        before = [_normal_equations(grid[:8], squared[:8], t, 0.25)[0] for t in grid[:8]]
        after = [_normal_equations(grid[8:], squared[8:], t, 0.25)[0] for t in grid[8:]]
        np.testing.assert_allclose(fit.sigma2_hat, np.maximum(before + after, 1e-8), atol=1e-12)
        assert fit.break_index == 8

    def test_short_segment(self, rng):
        with pytest.raises(DegenerateSegmentError):
            variance_fit_piecewise(make_residuals(rng.normal(size=100)), 0.02, 0.1)

    def test_scaling(self, rng):
        res = make_residuals(rng.normal(size=80))
        base = variance_fit_smooth(res, 0.25)
        scaled = variance_fit_smooth(res.scaled(3.0), 0.25)
        np.testing.assert_allclose(scaled.sigma2_hat, 9.0 * base.sigma2_hat, rtol=1e-10)


class TestLocator:
    def test_noiseless_step(self):
        e = np.concatenate([np.ones(50), 2.0 * np.ones(50)])
        located = variance_break_locate(make_residuals(e), 4, 0.1)
        assert located.index == 50
        assert located.fraction == pytest.approx(0.5)
        assert located.contrast == pytest.approx(-2.25)

    def test_constant_ties_to_first(self):
        located = variance_break_locate(make_residuals(np.ones(100)), 4, 0.1)
        assert located.index == 10

    def test_window_too_wide(self):
        with pytest.raises(LocatorWindowError):
            variance_break_locate(make_residuals(np.ones(100)), 10, 0.05)

    def test_default_parameters(self):
        assert default_locator_params(500) == (7, 0.016)
        assert default_locator_params(100) == (4, 0.04)
        assert default_locator_params(500, zeta=0.1, L=3) == (3, 0.1)
