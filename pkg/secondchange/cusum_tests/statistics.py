import numpy as np

from secondchange.cusum_tests.dc import CusumSeries, WSequence
from secondchange.cusum_tests.exception import LagError
from secondchange.smoothing.dc import Residuals, VarianceFit
from secondchange.core.exception import DimensionMismatchError


def _max_drift(series: CusumSeries) -> float:
    return float(np.max(np.abs(series.drift)) / np.sqrt(series.n))


def cusum_variance_statistic(res: Residuals) -> float:
    """max_i |S_i - (i/n) S_n| / sqrt(n) over the squared residuals."""
    return _max_drift(CusumSeries.from_values(res.squared))


def w_sequence(res: Residuals, var_fit: VarianceFit, k: int) -> WSequence:
    """W_i = e_i e_{i+k} / sigma2(t_i), with e_j = 0 for j > n."""
    if k < 1 or k >= res.n / 4:
        raise LagError(f"Lag k={k} must satisfy 1 <= k < n/4 (n={res.n})")
    if var_fit.sigma2_hat.shape[0] != res.n:
        raise DimensionMismatchError(
            f"Variance fit has {var_fit.sigma2_hat.shape[0]} points, residuals have {res.n}"
        )
    w = res.e_hat * res.shifted(k) / var_fit.sigma2_hat
    return WSequence(w=w, lag=k, variance_variant=var_fit.variant)


def cusum_correlation_statistic(w: WSequence) -> float:
    return _max_drift(CusumSeries.from_values(w.w))
