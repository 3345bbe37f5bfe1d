import logging
from typing import Literal

from secondchange.core.series import TimeSeries
from secondchange.cusum_tests.dc import VARIANCE_VARIANT, BootstrapConfig, SegmentReport, Tuning
from secondchange.cusum_tests.procedures import (
    classical_correlation_test,
    classical_variance_test,
    fit_residuals,
    fit_variance,
)
from secondchange.relevant_tests.estimators import correlation_cp_argmax, variance_cp_argmax
from secondchange.relevant_tests.exception import EndpointChangePointError

_logger = logging.getLogger(__name__)


def segment_analysis(
        series: TimeSeries,
        kind: Literal["variance", "correlation"],
        tuning: Tuning,
        cfg: BootstrapConfig,
        k: int = 1,
        variance_variant: VARIANCE_VARIANT = "piecewise",
        logger: logging.Logger = _logger,
) -> SegmentReport:
    """Runs a classical test on the whole sample and on both sides of its CUSUM-argmax change point.

    The split is t_tilde for the variance and t_hat (lag ``k``) for the correlation.
    """
    res = fit_residuals(series, tuning)
    if kind == "variance":
        cp = variance_cp_argmax(res)

        def run(part: TimeSeries):
            return classical_variance_test(part, tuning, cfg, logger)
    else:
        var_fit, _, _, _ = fit_variance(res, tuning, "piecewise")
        cp = correlation_cp_argmax(res, var_fit, k)

        def run(part: TimeSeries):
            return classical_correlation_test(part, k, variance_variant, tuning, cfg, logger)

    if cp.index <= 1 or cp.index >= series.n:
        raise EndpointChangePointError(f"Change point index {cp.index} leaves no sample on one side")
    logger.info(f"Splitting {series.name} at {cp.index}/{series.n} ({kind})")
    return SegmentReport(
        test=kind,
        split_index=cp.index,
        split_fraction=cp.fraction,
        whole=run(series),
        before=run(series.segment(0, cp.index, name=f"{series.name}[before]")),
        after=run(series.segment(cp.index, series.n, name=f"{series.name}[after]")),
    )
