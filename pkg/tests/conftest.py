import numpy as np
import pytest

from secondchange.core.series import TimeSeries
from secondchange.pls_sim.dc import PlsModelSpec
from secondchange.pls_sim.simulator import simulate
from secondchange.smoothing.dc import Residuals, VarianceFit


def make_residuals(e_hat, series_variance: float = 1.0) -> Residuals:
    return Residuals(
        e_hat=np.asarray(e_hat, dtype=float), bandwidth=0.1, kernel_id="epanechnikov", series_variance=series_variance
    )


def unit_variance_fit(n: int) -> VarianceFit:
    return VarianceFit(
        sigma2_hat=np.ones(n),
        variant="piecewise",
        bandwidths=(0.1, 0.1),
        kernel_id="epanechnikov",
        floor=1e-8,
        floor_applied=False,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def null_series() -> TimeSeries:
    return simulate(PlsModelSpec(model_id="I"), 200, seed=11)


@pytest.fixture
def variance_break_series() -> TimeSeries:
    """Standard deviation doubles at t = 0.5."""
    return simulate(PlsModelSpec(model_id="I'", lam=3.0), 400, seed=5)


@pytest.fixture
def correlation_break_series() -> TimeSeries:
    """Lag-1 correlation jumps from -0.7 to 0.7 at t = 0.5."""
    return simulate(PlsModelSpec(model_id="IV'", lam=1.2), 400, seed=9)
