from typing import Callable, Literal, Optional, Union

from loguru import logger

from secondchange.bandwidth.selectors import default_mv_grid, gcv_select, gcv_select_variance, mv_select
from secondchange.core.series import TimeSeries
from secondchange.cusum_tests.dc import VARIANCE_VARIANT, Tuning
from secondchange.cusum_tests.procedures import fit_residuals, fit_variance
from secondchange.cusum_tests.statistics import (
    cusum_correlation_statistic,
    cusum_variance_statistic,
    w_sequence,
)
from secondchange.relevant_tests.estimators import correlation_cp_argmax, variance_cp_argmax
from secondchange.relevant_tests.statistics import relevant_correlation_statistic, relevant_variance_statistic
from secondchange.smoothing.kernel import get_kernel
from secondchange.smoothing.local_linear import local_linear_fit, residuals

TEST_NAME = Literal["variance", "correlation", "relevant-variance", "relevant-correlation"]
Choice = Union[Literal["mv", "gcv"], float]


def statistic_path(
        series: TimeSeries, test: TEST_NAME, base: Tuning, k: int = 1, variance_variant: VARIANCE_VARIANT = "piecewise"
) -> Callable[[float], float]:
    """The test statistic as a function of the mean bandwidth b, other tuning held at ``base``."""

    def at(b: float) -> float:
        tuning = base.model_copy(update={"b": b})
        res = fit_residuals(series, tuning)
        if test == "variance":
            return cusum_variance_statistic(res)
        if test == "relevant-variance":
            return relevant_variance_statistic(res, variance_cp_argmax(res))
        var_fit, _, _, _ = fit_variance(res, tuning, "piecewise" if test == "relevant-correlation" else variance_variant)
        if test == "correlation":
            return cusum_correlation_statistic(w_sequence(res, var_fit, k))
        return relevant_correlation_statistic(res, var_fit, correlation_cp_argmax(res, var_fit, k), k)

    return at


def resolve_tuning(
        series: TimeSeries,
        test: TEST_NAME,
        bandwidth: Choice = "gcv",
        variance_bandwidth: Optional[Union[Literal["gcv"], float]] = None,
        kernel: str = "epanechnikov",
        k: int = 1,
        variance_variant: VARIANCE_VARIANT = "piecewise",
        L: int = None,
        zeta: float = None,
        threads: int = 1,
) -> Tuning:
    """Turns bandwidth choices into a concrete ``Tuning``.

    The variance bandwidth c is only resolved for correlation tests; GCV for c
    runs on residuals of a pilot mean fit (the fixed b, or the GCV b otherwise).
    MV then scans b with c held fixed.
    """
    kernel_spec = get_kernel(kernel)
    needs_c = test in ("correlation", "relevant-correlation")
    pilot_b = bandwidth if not isinstance(bandwidth, str) else gcv_select(series, kernel_spec).bandwidth
    c, c_source = None, None
    if needs_c:
        if variance_bandwidth is None or variance_bandwidth == "gcv":
            pilot = residuals(series, local_linear_fit(series, pilot_b, kernel_spec))
            c, c_source = gcv_select_variance(pilot, kernel_spec).bandwidth, "gcv"
        else:
            c, c_source = float(variance_bandwidth), "fixed"
    base = Tuning(
        b=pilot_b,
        c=c,
        kernel=kernel,
        L=L,
        zeta=zeta,
        bandwidth_source=bandwidth if isinstance(bandwidth, str) else "fixed",
        variance_bandwidth_source=c_source,
    )
    if bandwidth == "mv":
        selection = mv_select(
            default_mv_grid(series.n), statistic_path(series, test, base, k, variance_variant), threads=threads
        )
        base = base.model_copy(update={"b": selection.bandwidth})
    logger.debug(f"Tuning for {test}: b={base.b:.4g} ({base.bandwidth_source}) c={base.c} ({c_source})")
    return base
