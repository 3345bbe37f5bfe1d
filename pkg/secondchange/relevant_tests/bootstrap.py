import logging

import numpy as np

from secondchange.cusum_tests.bootstrap import BootstrapEngine, bridge
from secondchange.cusum_tests.dc import BootstrapConfig
from secondchange.relevant_tests.dc import ChangePointEstimate, DeltaEstimate
from secondchange.relevant_tests.estimators import correlation_products
from secondchange.relevant_tests.statistics import bridge_weights, check_interior, normalization
from secondchange.smoothing.dc import Residuals, VarianceFit

_logger = logging.getLogger(__name__)


def centred_summands(values: np.ndarray, cp: ChangePointEstimate, delta_est: DeltaEstimate) -> np.ndarray:
    """values_j - Delta 1(j >= p) with j counted from 1."""
    shifted = np.asarray(values, dtype=float).copy()
    shifted[cp.index - 1:] -= delta_est.delta
    return shifted


def l2_reducer(n: int, m: int, t: float):
    """Maps Phi blocks to (1/n) 6/(t^2(1-t)^2) sum_i bridge_i ((i/n) t - min(i/n, t))."""
    weights = bridge_weights(n, m, t)
    scale = 2.0 * normalization(t) / n

    def reduce(phi: np.ndarray) -> np.ndarray:
        return scale * np.sum(bridge(phi)[..., m:] * weights, axis=-1)

    return reduce


def _sample(values, cp, delta_est, cfg, logger) -> np.ndarray:
    n = values.shape[0]
    t = check_interior(cp, n)
    m = cfg.window(n)
    return BootstrapEngine(cfg, logger).sample(centred_summands(values, cp, delta_est), m, l2_reducer(n, m, t))


def relevant_variance_bootstrap(
        res: Residuals,
        cp: ChangePointEstimate,
        delta_est: DeltaEstimate,
        cfg: BootstrapConfig,
        logger: logging.Logger = _logger,
) -> np.ndarray:
    return _sample(res.squared, cp, delta_est, cfg, logger)


def relevant_correlation_bootstrap(
        res: Residuals,
        var_fit: VarianceFit,
        cp: ChangePointEstimate,
        delta_est: DeltaEstimate,
        k: int,
        cfg: BootstrapConfig,
        logger: logging.Logger = _logger,
) -> np.ndarray:
    return _sample(correlation_products(res, var_fit, k), cp, delta_est, cfg, logger)
