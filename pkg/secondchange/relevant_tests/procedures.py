import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.stats import norm

from secondchange.core.numeric import level_key, order_statistic_rank
from secondchange.core.series import TimeSeries
from secondchange.cusum_tests.dc import BootstrapConfig, LocatorRecord, Tuning, TuningRecord
from secondchange.cusum_tests.procedures import fit_residuals, fit_variance
from secondchange.relevant_tests.bootstrap import relevant_correlation_bootstrap, relevant_variance_bootstrap
from secondchange.relevant_tests.dc import (
    ChangePointEstimate,
    CurvePoint,
    DeltaEstimate,
    PValueCurve,
    RelevantTestReport,
)
from secondchange.relevant_tests.estimators import (
    correlation_cp_argmax,
    correlation_delta,
    variance_cp_argmax,
    variance_delta,
)
from secondchange.relevant_tests.exception import DeltaThresholdError
from secondchange.relevant_tests.statistics import relevant_correlation_statistic, relevant_variance_statistic

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelevantRun:
    """Everything of a relevant test that does not depend on delta."""

    test: str
    n: int
    statistic: float
    change_point: ChangePointEstimate
    delta_estimate: DeltaEstimate
    sample: np.ndarray
    record: TuningRecord
    variance_locator: Optional[LocatorRecord] = None
    floor_applied: Optional[bool] = None


def _check_delta(delta: float) -> None:
    if not delta > 0.0 or not math.isfinite(delta):
        raise DeltaThresholdError(f"delta must be a positive number, got {delta}")


def relevant_decision(statistic: float, sample: np.ndarray, n: int, delta: float, alphas: Iterable[float]):
    """Quantiles, thresholds, decisions and p-value of the rule stat > delta^2 + M delta / sqrt(n).

    The p-value is 1 - B*/B with B* the number of order statistics whose
    threshold delta^2 + M_(r) delta / sqrt(n) does not exceed the statistic.
    """
    _check_delta(delta)
    ordered = np.sort(sample)
    B = ordered.shape[0]
    bounds = delta ** 2 + ordered * delta / math.sqrt(n)
    quantiles, thresholds, decisions = {}, {}, {}
    for alpha in alphas:
        rank = order_statistic_rank(B, alpha)
        quantiles[level_key(1.0 - alpha)] = float(ordered[rank - 1])
        thresholds[level_key(1.0 - alpha)] = float(bounds[rank - 1])
        decisions[level_key(alpha)] = bool(statistic > bounds[rank - 1])
    below = int(np.searchsorted(bounds, statistic, side="right"))
    return quantiles, thresholds, decisions, 1.0 - below / B


def _record(tuning: Tuning, cfg: BootstrapConfig, m: int, **extra) -> TuningRecord:
    return TuningRecord(
        b_n=tuning.b,
        m=m,
        kernel=tuning.kernel,
        B=cfg.B,
        seed=cfg.seed,
        bandwidth_source=tuning.bandwidth_source,
        variance_bandwidth_source=tuning.variance_bandwidth_source,
        **extra,
    )


def run_relevant_variance(
        series: TimeSeries, tuning: Tuning, cfg: BootstrapConfig, logger: logging.Logger = _logger
) -> RelevantRun:
    res = fit_residuals(series, tuning)
    cp = variance_cp_argmax(res)
    statistic = relevant_variance_statistic(res, cp)
    delta_est = variance_delta(res, cp)
    sample = relevant_variance_bootstrap(res, cp, delta_est, cfg, logger)
    logger.debug(f"Variance change point at {cp.index}/{series.n}, Delta={delta_est.delta:.4g}")
    return RelevantRun(
        test="relevant-variance",
        n=series.n,
        statistic=statistic,
        change_point=cp,
        delta_estimate=delta_est,
        sample=sample,
        record=_record(tuning, cfg, cfg.window(series.n)),
    )


def run_relevant_correlation(
        series: TimeSeries,
        k: int,
        tuning: Tuning,
        cfg: BootstrapConfig,
        assume_no_variance_break: bool = False,
        logger: logging.Logger = _logger,
) -> RelevantRun:
    """Residuals, break-aware variance fit, t_hat, Delta_hat, statistic and bootstrap sample.

    With ``assume_no_variance_break`` the smooth variance fit replaces the break-aware one.
    """
    res = fit_residuals(series, tuning)
    var_fit, locator, L, zeta = fit_variance(res, tuning, "smooth" if assume_no_variance_break else "piecewise")
    cp = correlation_cp_argmax(res, var_fit, k)
    statistic = relevant_correlation_statistic(res, var_fit, cp, k)
    delta_est = correlation_delta(res, var_fit, cp, k)
    sample = relevant_correlation_bootstrap(res, var_fit, cp, delta_est, k, cfg, logger)
    logger.debug(f"Lag-{k} correlation change point at {cp.index}/{series.n}, Delta={delta_est.delta:.4g}")
    return RelevantRun(
        test="relevant-correlation",
        n=series.n,
        statistic=statistic,
        change_point=cp,
        delta_estimate=delta_est,
        sample=sample,
        record=_record(
            tuning, cfg, cfg.window(series.n), c_n=tuning.c, L=L, zeta=zeta, lag=k, variance_variant=var_fit.variant
        ),
        variance_locator=locator,
        floor_applied=var_fit.floor_applied,
    )


def decide(run: RelevantRun, delta: float, alphas: Iterable[float]) -> RelevantTestReport:
    quantiles, thresholds, decisions, p_value = relevant_decision(run.statistic, run.sample, run.n, delta, alphas)
    return RelevantTestReport(
        test=run.test,
        n=run.n,
        statistic=run.statistic,
        delta_threshold=delta,
        delta_estimate=run.delta_estimate,
        change_point=run.change_point,
        quantiles=quantiles,
        thresholds=thresholds,
        decisions=decisions,
        p_value=p_value,
        tuning=run.record,
        variance_locator=run.variance_locator,
        floor_applied=run.floor_applied,
        bootstrap_mean=float(np.mean(run.sample)),
        bootstrap_sd=float(np.std(run.sample, ddof=1)),
    )


def relevant_variance_test(
        series: TimeSeries,
        delta: float,
        tuning: Tuning,
        cfg: BootstrapConfig,
        logger: logging.Logger = _logger,
) -> RelevantTestReport:
    """Test of |v2 - v1| <= delta against a relevant change in the variance."""
    _check_delta(delta)
    report = decide(run_relevant_variance(series, tuning, cfg, logger), delta, cfg.alphas)
    logger.info(f"Relevant variance test delta={delta:g}: statistic={report.statistic:.5g} p={report.p_value:.4f}")
    return report


def relevant_correlation_test(
        series: TimeSeries,
        k: int,
        delta: float,
        tuning: Tuning,
        cfg: BootstrapConfig,
        assume_no_variance_break: bool = False,
        logger: logging.Logger = _logger,
) -> RelevantTestReport:
    """Test of |rho2 - rho1| <= delta for the lag-k correlation."""
    _check_delta(delta)
    run = run_relevant_correlation(series, k, tuning, cfg, assume_no_variance_break, logger)
    report = decide(run, delta, cfg.alphas)
    logger.info(
        f"Relevant lag-{k} correlation test delta={delta:g}: statistic={report.statistic:.5g} p={report.p_value:.4f}"
    )
    return report


def p_value_curve(run: RelevantRun, deltas: Sequence[float], alphas: Iterable[float]) -> PValueCurve:
    """p-values over a grid of thresholds from one statistic and one bootstrap sample."""
    alphas = tuple(alphas)
    points = []
    for delta in deltas:
        _, _, decisions, p_value = relevant_decision(run.statistic, run.sample, run.n, delta, alphas)
        points.append(CurvePoint(delta=delta, p_value=p_value, decisions=decisions))
    return PValueCurve(test=run.test, statistic=run.statistic, points=points)


def largest_rejected_delta(curve: PValueCurve, alpha: float) -> Optional[float]:
    """Largest delta of the curve at which the test still rejects at level alpha."""
    key = level_key(alpha)
    rejected = [point.delta for point in curve.points if point.decisions.get(key, point.p_value < alpha)]
    return max(rejected) if rejected else None


def power_approximation(delta: float, Delta_abs: float, n: int, sd_Z1: float, alpha: float = 0.05) -> float:
    """1 - Psi(sqrt(n)(delta^2 - Delta^2)/|Delta| + v delta/|Delta|) with Psi = N(0, sd_Z1^2), v its 1-alpha quantile."""
    if Delta_abs == 0.0:
        raise DeltaThresholdError("The approximation needs a non-zero change |Delta|")
    if not sd_Z1 > 0.0:
        raise DeltaThresholdError(f"sd_Z1 must be positive, got {sd_Z1}")
    Delta_abs = abs(Delta_abs)
    quantile = norm.ppf(1.0 - alpha, scale=sd_Z1)
    argument = math.sqrt(n) * (delta ** 2 - Delta_abs ** 2) / Delta_abs + quantile * delta / Delta_abs
    return float(norm.sf(argument, scale=sd_Z1))
