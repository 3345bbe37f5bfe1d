import numpy as np

from secondchange.core.exception import DimensionMismatchError
from secondchange.core.numeric import first_argmax, summation_tolerance
from secondchange.cusum_tests.exception import LagError
from secondchange.relevant_tests.dc import ChangePointEstimate, DeltaEstimate
from secondchange.relevant_tests.exception import EndpointChangePointError
from secondchange.smoothing.dc import Residuals, VarianceFit


def cusum_argmax(values: np.ndarray, total: float = None, target: str = "variance", lag: int = None) -> ChangePointEstimate:
    """argmax over 1 <= m <= n of (S_m - (m/n) total)^2, smallest index on ties.

    ``total`` defaults to S_n.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    partial = np.cumsum(values)
    total = partial[-1] if total is None else total
    drift = partial - np.arange(1, n + 1) / n * total
    best = first_argmax(np.abs(drift), atol=summation_tolerance(values))
    return ChangePointEstimate(
        index=best + 1, fraction=(best + 1) / n, objective=float(drift[best] ** 2), target=target, lag=lag
    )


def correlation_products(res: Residuals, var_fit: VarianceFit, k: int) -> np.ndarray:
    """e_j e_{j+k} / sigma2*(t_j) with e_i = 0 for i >= n."""
    if k < 1 or k >= res.n / 4:
        raise LagError(f"Lag k={k} must satisfy 1 <= k < n/4 (n={res.n})")
    if var_fit.sigma2_hat.shape[0] != res.n:
        raise DimensionMismatchError(
            f"Variance fit has {var_fit.sigma2_hat.shape[0]} points, residuals have {res.n}"
        )
    e = res.e_hat.copy()
    e[-1] = 0.0
    lagged = np.zeros(res.n)
    lagged[: res.n - k] = e[k:]
    return e * lagged / var_fit.sigma2_hat


def variance_cp_argmax(res: Residuals) -> ChangePointEstimate:
    return cusum_argmax(res.squared, target="variance")


def correlation_cp_argmax(res: Residuals, var_fit: VarianceFit, k: int) -> ChangePointEstimate:
    """argmax of the squared lag-k CUSUM process at the grid points m/n."""
    w = correlation_products(res, var_fit, k)
    return cusum_argmax(w, total=float(np.sum(w[: res.n - k])), target="correlation", lag=k)


def _split(n: int, cp: ChangePointEstimate) -> int:
    if not 1 <= cp.index < n:
        raise EndpointChangePointError(f"Change point index {cp.index} leaves an empty segment (n={n})")
    return cp.index


def segment_levels(values: np.ndarray, cp: ChangePointEstimate, stop: int = None) -> DeltaEstimate:
    """Mean of ``values`` over 1..p and, divided by n - p, their sum over p+1..stop."""
    n = values.shape[0]
    split = _split(n, cp)
    stop = n if stop is None else stop
    before = float(np.mean(values[:split]))
    after = float(np.sum(values[split:stop]) / (n - split))
    return DeltaEstimate.from_levels(before, after)


def variance_delta(res: Residuals, cp: ChangePointEstimate) -> DeltaEstimate:
    return segment_levels(res.squared, cp)


def correlation_delta(res: Residuals, var_fit: VarianceFit, cp: ChangePointEstimate, k: int) -> DeltaEstimate:
    """Lag-k correlation levels; the second segment sum ends at n - k."""
    return segment_levels(correlation_products(res, var_fit, k), cp, stop=res.n - k)
