import numpy as np

from secondchange.relevant_tests.dc import ChangePointEstimate
from secondchange.relevant_tests.estimators import correlation_products
from secondchange.relevant_tests.exception import EndpointChangePointError
from secondchange.smoothing.dc import Residuals, VarianceFit


def check_interior(cp: ChangePointEstimate, n: int) -> float:
    if cp.index <= 1 or cp.index >= n:
        raise EndpointChangePointError(
            f"Change point index {cp.index} is an endpoint of 1..{n}; t^2 (1-t)^2 degenerates"
        )
    return cp.fraction


def cusum_l2_integral(values: np.ndarray, total: float = None) -> float:
    """Exact integral over [0, 1] of U(s)^2, U(s) = S_floor(ns) / n - s total / n.

    U is affine on every cell [j/n, (j+1)/n), so Simpson's rule is exact per cell.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    partial = np.concatenate([[0.0], np.cumsum(values)])[:n]
    total = float(np.sum(values)) if total is None else total
    left = np.arange(n) / n
    mid = left + 0.5 / n
    right = left + 1.0 / n

    def u(s):
        return partial / n - s * total / n

    cells = (u(left) ** 2 + 4.0 * u(mid) ** 2 + u(right) ** 2) / (6.0 * n)
    return float(np.sum(cells))


def normalization(t: float) -> float:
    return 3.0 / (t ** 2 * (1.0 - t) ** 2)


def relevant_variance_statistic(res: Residuals, cp: ChangePointEstimate) -> float:
    """3 / (t^2 (1-t)^2) times the L2 norm of the squared-residual CUSUM process."""
    t = check_interior(cp, res.n)
    return normalization(t) * cusum_l2_integral(res.squared)


def relevant_correlation_statistic(res: Residuals, var_fit: VarianceFit, cp: ChangePointEstimate, k: int) -> float:
    t = check_interior(cp, res.n)
    w = correlation_products(res, var_fit, k)
    return normalization(t) * cusum_l2_integral(w, total=float(np.sum(w[: res.n - k])))


def bridge_weights(n: int, m: int, t: float) -> np.ndarray:
    """(i/n) t - min(i/n, t) for i = m+1..n-m+1."""
    fractions = np.arange(m + 1, n - m + 2) / n
    return fractions * t - np.minimum(fractions, t)
