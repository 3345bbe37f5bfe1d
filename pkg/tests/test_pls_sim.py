import numpy as np
import pytest
from pydantic import ValidationError

from secondchange.pls_sim.dc import PlsModelSpec
from secondchange.pls_sim.exception import ModelSpecError, SimulationError
from secondchange.pls_sim.innovations import InnovationStream
from secondchange.pls_sim.models import MODELS, mean_function
from secondchange.pls_sim.simulator import oracle, simulate


def _lag_corr(x, k=1):
    return np.corrcoef(x[:-k], x[k:])[0, 1]


class TestInnovationStream:
    def test_index_stable_across_lengths(self):
        short = InnovationStream(7).window(200, 50)
        long = InnovationStream(7).window(300, 80)
        np.testing.assert_array_equal(short[200:], long[300:350])
        np.testing.assert_array_equal(short[:200], long[100:300])

    def test_seeds_differ(self):
        assert not np.array_equal(InnovationStream(1).window(10, 10), InnovationStream(2).window(10, 10))


class TestModelSpec:
    def test_lambda_rejected_for_plain_models(self):
        with pytest.raises(ValidationError):
            PlsModelSpec(model_id="I", lam=0.5)

    @pytest.mark.parametrize("model_id, lam", [("I'", -1.0), ("II'", -2.5), ("III'", 1.3), ("IV'", -0.5)])
    def test_lambda_range(self, model_id, lam):
        with pytest.raises(ValidationError):
            PlsModelSpec(model_id=model_id, lam=lam)

    def test_build_unknown_model(self):
        with pytest.raises(ModelSpecError):
            PlsModelSpec.build(model_id="VII")

    def test_registry_ground_truth(self):
        assert MODELS["III"].delta == pytest.approx(1 / 64)
        assert MODELS["VI"].delta == pytest.approx(0.2)
        assert not MODELS["I"].variance_break
        assert MODELS["V"].variance_break
        assert MODELS["IV"].break_point is None


class TestSimulate:
    def test_deterministic(self):
        spec = PlsModelSpec(model_id="III")
        np.testing.assert_array_equal(simulate(spec, 300, 4).values, simulate(spec, 300, 4).values)

    def test_seed_changes_path(self):
        spec = PlsModelSpec(model_id="II")
        assert not np.array_equal(simulate(spec, 100, 1).values, simulate(spec, 100, 2).values)

    def test_too_short(self):
        with pytest.raises(SimulationError):
            simulate(PlsModelSpec(model_id="I"), 5, 0)

    def test_mean_added(self):
        with_mean = simulate(PlsModelSpec(model_id="IV"), 200, 3)
        without = simulate(PlsModelSpec(model_id="IV", include_mean=False), 200, 3)
        t = np.arange(1, 201) / 200
        np.testing.assert_allclose(with_mean.values - without.values, mean_function(t), atol=1e-12)

    def test_mean_function_values(self):
        assert mean_function(np.array([0.0, 0.5, 1.0])) == pytest.approx([0.0, 2.0, 0.0])

    def test_model_one_second_order_structure(self):
        series = simulate(PlsModelSpec(model_id="I", include_mean=False), 20000, 8)
        half = series.values[:10000], series.values[10000:]
        assert np.var(series.values) == pytest.approx(1 / 12, rel=0.1)
        assert _lag_corr(half[0]) == pytest.approx(0.5, abs=0.05)
        assert _lag_corr(half[1]) == pytest.approx(-0.5, abs=0.05)

    def test_model_four_correlation(self):
        series = simulate(PlsModelSpec(model_id="IV", include_mean=False), 20000, 2)
        assert _lag_corr(series.values) == pytest.approx(0.3, abs=0.05)

    def test_zero_lambda_is_null_model(self):
        null = simulate(PlsModelSpec(model_id="I"), 300, 21)
        primed = simulate(PlsModelSpec(model_id="I'", lam=0.0), 300, 21)
        np.testing.assert_array_equal(primed.values, null.values)

    def test_ma_truncation_converged(self):
        short = simulate(PlsModelSpec(model_id="II", ma_truncation=100), 400, 6)
        long = simulate(PlsModelSpec(model_id="II", ma_truncation=200), 400, 6)
        np.testing.assert_allclose(short.values, long.values, atol=1e-10)

    def test_model_two_constant_variance(self):
        series = simulate(PlsModelSpec(model_id="II", include_mean=False), 50000, 13)
        assert np.var(series.values) == pytest.approx(1 / 16, rel=0.05)

    def test_meta(self):
        series = simulate(PlsModelSpec(model_id="VI"), 50, 12)
        assert series.meta == {"model": "VI", "lam": 0.0, "seed": 12}
        assert series.n == 50


class TestOracle:
    def test_ar_moments(self):
        spec = PlsModelSpec(model_id="VI")
        truth = oracle(spec)
        t = np.array([0.25, 0.75])
        scale2 = (1.0 - (t - 0.5) ** 2) / 64.0
        c = np.array([0.5, 0.7])
        np.testing.assert_allclose(truth.variance(t), scale2 / (1.0 - c ** 2))
        np.testing.assert_allclose(truth.lag_correlation(t, 2), c ** 2)

    def test_model_two_variance(self):
        assert float(oracle(PlsModelSpec(model_id="II")).variance(1 / 16)) == pytest.approx(0.0625, rel=1e-12)

    def test_ma_truncated_series(self):
        spec = PlsModelSpec(model_id="II", ma_truncation=30)
        truth = oracle(spec)
        t = 0.4
        a = 0.25 + t / 2.0
        s2 = (1.0 - a ** 2) / 16.0
        weights = a ** np.arange(30)
        assert float(truth.variance(t)) == pytest.approx(s2 * np.sum(weights ** 2), rel=1e-12)
        k = 3
        expected = np.sum(weights[:-k] * weights[k:]) / np.sum(weights ** 2)
        assert float(truth.lag_correlation(t, k)) == pytest.approx(expected, rel=1e-12)
