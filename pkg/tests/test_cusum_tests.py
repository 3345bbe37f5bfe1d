from dataclasses import replace

import numpy as np
import pytest
from pydantic import ValidationError

from secondchange.core.series import TimeSeries
from secondchange.cusum_tests.bootstrap import BootstrapEngine, bootstrap_max_statistic, bootstrap_phi
from secondchange.cusum_tests.dc import BootstrapConfig, CusumSeries, Tuning, WSequence
from secondchange.cusum_tests.exception import BootstrapConfigError, LagError
from secondchange.cusum_tests.procedures import (
    classical_correlation_test,
    classical_decision,
    classical_variance_test,
    fit_residuals,
    fit_variance,
)
from secondchange.cusum_tests.segments import segment_analysis
from secondchange.cusum_tests.statistics import cusum_correlation_statistic, cusum_variance_statistic, w_sequence
from tests.conftest import make_residuals, unit_variance_fit

# Trim 0.15 keeps every located split at least 60 points from the ends, above n * c = 40.
BREAK_AWARE = Tuning(b=0.15, c=0.1, L=40, zeta=0.15)


def _phi_oracle(values, m, R):
    n = len(values)
    total = sum(values)
    phi, running = [], 0.0
    for j in range(n - m + 1):
        window = sum(values[j:j + m])
        running += (window - m / n * total) * R[j]
        phi.append(running / np.sqrt(m * (n - m + 1)))
    return np.array(phi)


class TestStatistics:
    def test_drift_pinned_at_end(self, rng):
        series = CusumSeries.from_values(rng.normal(size=37))
        assert series.drift[-1] == 0.0

    def test_variance_statistic_oracle(self, rng):
        e = rng.normal(size=10)
        squared = e ** 2
        expected = max(abs(squared[:i].sum() - i / 10 * squared.sum()) for i in range(1, 11)) / np.sqrt(10)
        assert cusum_variance_statistic(make_residuals(e)) == pytest.approx(expected, abs=1e-12)

    def test_variance_statistic_by_hand(self):
        # partial sums (1, 3, 6, 10), drifts (-1.5, -2, -1.5, 0)
        e = np.sqrt([1.0, 2.0, 3.0, 4.0])
        assert cusum_variance_statistic(make_residuals(e)) == pytest.approx(1.0, abs=1e-12)

    def test_correlation_statistic_by_hand(self):
        w = WSequence(w=np.array([1.0, -1.0, 1.0, -1.0]), lag=1, variance_variant="smooth")
        assert cusum_correlation_statistic(w) == pytest.approx(0.5, abs=1e-12)

    def test_statistics_invariant_to_affine_mean(self, null_series):
        tuning = Tuning(b=0.15, c=0.2)
        shifted = TimeSeries(null_series.values + 3.0 - 2.0 * null_series.grid)
        variance, correlation = [], []
        for series in (null_series, shifted):
            res = fit_residuals(series, tuning)
            var_fit, _, _, _ = fit_variance(res, tuning, "smooth")
            variance.append(cusum_variance_statistic(res))
            correlation.append(cusum_correlation_statistic(w_sequence(res, var_fit, 1)))
        assert variance[1] == pytest.approx(variance[0], rel=1e-8)
        assert correlation[1] == pytest.approx(correlation[0], rel=1e-8)

    def test_constant_squares(self):
        assert cusum_variance_statistic(make_residuals(np.full(50, 1.5))) == pytest.approx(0.0, abs=1e-12)

    def test_w_sequence_oracle(self, rng):
        e = rng.normal(size=12)
        sigma2 = rng.uniform(0.5, 2.0, size=12)
        var_fit = replace(unit_variance_fit(12), sigma2_hat=sigma2)
        w = w_sequence(make_residuals(e), var_fit, 2)
        expected = [e[i] * (e[i + 2] if i + 2 < 12 else 0.0) / sigma2[i] for i in range(12)]
        np.testing.assert_allclose(w.w, expected, rtol=1e-14)
        assert w.w[-1] == 0.0 and w.w[-2] == 0.0

    @pytest.mark.parametrize("k", [0, 3])
    def test_lag_range(self, k):
        with pytest.raises(LagError):
            w_sequence(make_residuals(np.ones(12)), unit_variance_fit(12), k)

    def test_w_scale_invariant(self, correlation_break_series):
        tuning = Tuning(b=0.15, c=0.2)
        scaled = TimeSeries(3.0 * correlation_break_series.values)
        ws = []
        for series in (correlation_break_series, scaled):
            res = fit_residuals(series, tuning)
            var_fit, _, _, _ = fit_variance(res, tuning, "smooth")
            ws.append(w_sequence(res, var_fit, 1).w)
        np.testing.assert_allclose(ws[0], ws[1], atol=1e-8)


class TestBootstrap:
    def test_zero_multipliers(self, rng):
        phi = bootstrap_phi(rng.normal(size=30), 3, np.zeros(28))
        np.testing.assert_array_equal(phi, 0.0)

    def test_phi_oracle(self, rng):
        values = rng.normal(size=12)
        R = rng.normal(size=10)
        np.testing.assert_allclose(bootstrap_phi(values, 3, R), _phi_oracle(values, 3, R), atol=1e-12)

    def test_max_statistic_oracle(self, rng):
        values = rng.normal(size=12)
        R = rng.normal(size=10)
        phi = _phi_oracle(values, 3, R)
        expected = max(abs(phi[i - 1] - i / 10 * phi[-1]) for i in range(4, 11))
        assert float(bootstrap_max_statistic(bootstrap_phi(values, 3, R), 3, 12)) == pytest.approx(expected, abs=1e-12)

    def test_matrix_multipliers(self, rng):
        values = rng.normal(size=20)
        R = rng.normal(size=(4, 18))
        block = bootstrap_phi(values, 3, R)
        for row in range(4):
            np.testing.assert_allclose(block[row], bootstrap_phi(values, 3, R[row]), atol=1e-14)

    def test_default_window(self):
        assert BootstrapConfig().window(500) == 7
        assert BootstrapConfig(m=4).window(100) == 4
        with pytest.raises(BootstrapConfigError):
            BootstrapConfig(m=10).window(20)

    def test_config_validation(self):
        with pytest.raises(ValidationError):
            BootstrapConfig(B=100)
        with pytest.raises(ValidationError):
            BootstrapConfig(m=1)

    def test_thread_count_does_not_change_sample(self, rng):
        values = rng.normal(size=120) ** 2
        reduce = lambda phi: bootstrap_max_statistic(phi, 4, 120)  # noqa: E731
        single = BootstrapEngine(BootstrapConfig(B=300, seed=3, chunk_size=50)).sample(values, 4, reduce)
        multi = BootstrapEngine(BootstrapConfig(B=300, seed=3, chunk_size=50, threads=4)).sample(values, 4, reduce)
        np.testing.assert_array_equal(single, multi)

    def test_seed_changes_sample(self, rng):
        values = rng.normal(size=60) ** 2
        reduce = lambda phi: bootstrap_max_statistic(phi, 3, 60)  # noqa: E731
        first = BootstrapEngine(BootstrapConfig(B=199, seed=1)).sample(values, 3, reduce)
        second = BootstrapEngine(BootstrapConfig(B=199, seed=2)).sample(values, 3, reduce)
        assert first.shape == (199,)
        assert not np.array_equal(first, second)


class TestDecision:
    def test_order_statistics(self):
        sample = np.arange(1.0, 201.0)
        critical, decisions, p_value = classical_decision(190.5, sample, (0.10, 0.05))
        assert critical == {"0.9": 180.0, "0.95": 190.0}
        assert decisions == {"0.1": True, "0.05": True}
        assert p_value == pytest.approx(0.05)

    @pytest.mark.parametrize("statistic", [10.5, 150.5, 179.5, 185.5, 199.5, 250.0])
    def test_p_value_consistent(self, statistic):
        sample = np.arange(1.0, 201.0)
        _, decisions, p_value = classical_decision(statistic, sample, (0.10, 0.05))
        assert decisions["0.1"] == (p_value <= 0.10 + 1e-12)
        assert decisions["0.05"] == (p_value <= 0.05 + 1e-12)


class TestProcedures:
    def test_variance_test_report(self, null_series):
        cfg = BootstrapConfig(B=199, seed=4)
        report = classical_variance_test(null_series, Tuning(b=0.15), cfg)
        assert report.test == "variance"
        assert report.n == 200
        assert report.tuning.m == 5
        assert set(report.critical_values) == {"0.9", "0.95"}
        assert 0.0 <= report.p_value <= 1.0
        assert report.critical_values["0.9"] <= report.critical_values["0.95"]
        assert report.to_bytes() == classical_variance_test(null_series, Tuning(b=0.15), cfg).to_bytes()

    def test_variance_break_detected(self, variance_break_series):
        report = classical_variance_test(variance_break_series, Tuning(b=0.15), BootstrapConfig(B=299, seed=1))
        assert report.reject(0.05)

    def test_correlation_break_detected(self, correlation_break_series):
        report = classical_correlation_test(
            correlation_break_series, 1, "piecewise", BREAK_AWARE, BootstrapConfig(B=299, seed=2)
        )
        assert report.reject(0.05)
        assert report.locator is not None
        assert report.tuning.variance_variant == "piecewise"
        assert report.tuning.lag == 1

    def test_correlation_test_needs_c(self, null_series):
        with pytest.raises(Exception, match="variance bandwidth"):
            classical_correlation_test(null_series, 1, "smooth", Tuning(b=0.15), BootstrapConfig(B=199))

    def test_threads_reproduce(self, null_series):
        tuning = Tuning(b=0.2)
        one = classical_variance_test(null_series, tuning, BootstrapConfig(B=400, seed=9, chunk_size=100))
        many = classical_variance_test(null_series, tuning, BootstrapConfig(B=400, seed=9, chunk_size=100, threads=3))
        assert one.to_bytes() == many.to_bytes()


class TestSegments:
    def test_whole_before_after(self, variance_break_series):
        report = segment_analysis(variance_break_series, "variance", Tuning(b=0.15), BootstrapConfig(B=199, seed=3))
        assert 150 < report.split_index < 250
        assert report.before.n == report.split_index
        assert report.before.n + report.after.n == 400
        assert report.whole.reject(0.05)
