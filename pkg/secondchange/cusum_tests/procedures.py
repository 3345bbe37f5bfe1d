import logging
from typing import Optional, Tuple

import numpy as np

from secondchange.core.numeric import level_key, order_statistic_rank
from secondchange.core.series import TimeSeries
from secondchange.cusum_tests.bootstrap import BootstrapEngine, bootstrap_max_statistic
from secondchange.cusum_tests.dc import (
    VARIANCE_VARIANT,
    BootstrapConfig,
    LocatorRecord,
    TestReport,
    Tuning,
    TuningRecord,
)
from secondchange.cusum_tests.statistics import (
    cusum_correlation_statistic,
    cusum_variance_statistic,
    w_sequence,
)
from secondchange.smoothing.dc import Residuals, VarianceFit
from secondchange.smoothing.exception import BandwidthError
from secondchange.smoothing.kernel import get_kernel
from secondchange.smoothing.local_linear import (
    local_linear_fit,
    residuals,
    variance_fit_piecewise,
    variance_fit_smooth,
)
from secondchange.smoothing.locator import default_locator_params, variance_break_locate

_logger = logging.getLogger(__name__)


def classical_decision(statistic: float, sample: np.ndarray, alphas) -> Tuple[dict, dict, float]:
    """Critical values, decisions and p-value from the bootstrap order statistics.

    The critical value at level alpha is M_(floor(B(1-alpha))); the p-value is
    1 - B*/B with B* = max{r : M_(r) <= statistic}.
    """
    ordered = np.sort(sample)
    B = ordered.shape[0]
    critical_values, decisions = {}, {}
    for alpha in alphas:
        critical = float(ordered[order_statistic_rank(B, alpha) - 1])
        critical_values[level_key(1.0 - alpha)] = critical
        decisions[level_key(alpha)] = bool(statistic > critical)
    below = int(np.searchsorted(ordered, statistic, side="right"))
    return critical_values, decisions, 1.0 - below / B


def fit_residuals(series: TimeSeries, tuning: Tuning) -> Residuals:
    return residuals(series, local_linear_fit(series, tuning.b, get_kernel(tuning.kernel)))


def _report(test, series, statistic, sample, tuning, cfg, m, **extra) -> TestReport:
    critical_values, decisions, p_value = classical_decision(statistic, sample, cfg.alphas)
    record = TuningRecord(
        b_n=tuning.b,
        c_n=extra.pop("c_n", None),
        m=m,
        L=extra.pop("L", None),
        zeta=extra.pop("zeta", None),
        kernel=tuning.kernel,
        B=cfg.B,
        seed=cfg.seed,
        lag=extra.pop("lag", None),
        variance_variant=extra.pop("variance_variant", None),
        bandwidth_source=tuning.bandwidth_source,
        variance_bandwidth_source=tuning.variance_bandwidth_source,
    )
    return TestReport(
        test=test,
        n=series.n,
        statistic=statistic,
        critical_values=critical_values,
        p_value=p_value,
        decisions=decisions,
        tuning=record,
        bootstrap_mean=float(np.mean(sample)),
        bootstrap_sd=float(np.std(sample, ddof=1)),
        **extra,
    )


def classical_variance_test(
        series: TimeSeries,
        tuning: Tuning,
        cfg: BootstrapConfig,
        logger: logging.Logger = _logger,
) -> TestReport:
    """Bootstrap CUSUM test of a constant variance.

    Rejects when T_n / sqrt(n) exceeds the bootstrap order statistic
    M_(floor(B(1-alpha))).
    """
    res = fit_residuals(series, tuning)
    statistic = cusum_variance_statistic(res)
    m = cfg.window(series.n)
    sample = BootstrapEngine(cfg, logger).sample(
        res.squared, m, lambda phi: bootstrap_max_statistic(phi, m, series.n)
    )
    report = _report("variance", series, statistic, sample, tuning, cfg, m)
    logger.info(f"Variance test: statistic={statistic:.4f} p={report.p_value:.4f}")
    return report


def fit_variance(
        res: Residuals, tuning: Tuning, variant: VARIANCE_VARIANT
) -> Tuple[VarianceFit, Optional[LocatorRecord], Optional[int], Optional[float]]:
    """Smooth or break-aware variance fit, with the window locator output for the latter."""
    if tuning.c is None:
        raise BandwidthError("A variance bandwidth c is required")
    kernel = get_kernel(tuning.kernel)
    if variant == "smooth":
        return variance_fit_smooth(res, tuning.c, tuning.b, kernel), None, None, None
    L, zeta = default_locator_params(res.n, tuning.zeta, tuning.L)
    located = variance_break_locate(res, L, zeta)
    var_fit = variance_fit_piecewise(res, located.fraction, tuning.c, kernel)
    locator = LocatorRecord(
        method="window-contrast", index=located.index, fraction=located.fraction, value=located.contrast
    )
    return var_fit, locator, L, zeta


def classical_correlation_test(
        series: TimeSeries,
        k: int,
        variance_variant: VARIANCE_VARIANT,
        tuning: Tuning,
        cfg: BootstrapConfig,
        logger: logging.Logger = _logger,
) -> TestReport:
    """Bootstrap CUSUM test of a constant lag-k correlation."""
    res = fit_residuals(series, tuning)
    var_fit, locator, L, zeta = fit_variance(res, tuning, variance_variant)
    w = w_sequence(res, var_fit, k)
    statistic = cusum_correlation_statistic(w)
    m = cfg.window(series.n)
    sample = BootstrapEngine(cfg, logger).sample(w.w, m, lambda phi: bootstrap_max_statistic(phi, m, series.n))
    report = _report(
        "correlation",
        series,
        statistic,
        sample,
        tuning,
        cfg,
        m,
        c_n=tuning.c,
        L=L,
        zeta=zeta,
        lag=k,
        variance_variant=variance_variant,
        locator=locator,
        floor_applied=var_fit.floor_applied,
    )
    logger.info(f"Lag-{k} correlation test ({variance_variant}): statistic={statistic:.4f} p={report.p_value:.4f}")
    return report
