from typing import Callable, Sequence

import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from numpy.lib.stride_tricks import sliding_window_view

from secondchange.bandwidth.dc import GcvSelection, MvSelection
from secondchange.bandwidth.exception import DegenerateCriterionError, GridError
from secondchange.core.exception import DataError
from secondchange.core.numeric import first_argmin
from secondchange.core.series import TimeSeries
from secondchange.smoothing.dc import Residuals
from secondchange.smoothing.exception import SingularFitError
from secondchange.smoothing.kernel import EPANECHNIKOV, KernelSpec
from secondchange.smoothing.local_linear import MIN_POINTS, smoother_weights

MV_WINDOW = 7
MV_LOW, MV_HIGH, MV_SIZE = 0.025, 0.3, 12
GCV_HIGH, GCV_SIZE = 0.4, 30
GCV_MIN_N = 20
MV_MIN_N = 20
TIE_FACTOR = 1e-12


def default_mv_grid(n: int, low: float = MV_LOW, high: float = MV_HIGH, size: int = MV_SIZE) -> np.ndarray:
    """``size`` equispaced bandwidths from max(low, 3/n) to ``high``.

    Raises:
        DataError: If the series is too short for the grid to be increasing.
    """
    if n < MV_MIN_N:
        raise DataError(f"Minimal Volatility needs at least {MV_MIN_N} observations, got {n}")
    return np.linspace(max(low, (MIN_POINTS + 1e-9) / n), high, size)


def mv_select(grid: Sequence[float], stat_fn: Callable[[float], float], threads: int = 1) -> MvSelection:
    """Minimal Volatility selection.

    Evaluates the statistic at every candidate, takes the standard deviation over
    each window of 7 neighbours and returns the centre of the calmest window.

    Args:
        grid (Sequence[float]): Strictly increasing candidates d_1..d_l, l >= 7.
        stat_fn (Callable): Maps a bandwidth to the test statistic.
        threads (int): Candidates evaluated in parallel.

    Raises:
        GridError: If the grid is too short or not increasing.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.shape[0] < MV_WINDOW:
        raise GridError(f"Minimal Volatility needs at least {MV_WINDOW} candidates, got {grid.size}")
    if np.any(np.diff(grid) <= 0) or grid[0] <= 0 or grid[-1] >= 1:
        raise GridError("Bandwidth grid must be strictly increasing inside (0, 1)")
    statistics = np.array(
        Parallel(n_jobs=threads, prefer="threads")(delayed(stat_fn)(float(b)) for b in grid), dtype=float
    )
    sd_profile = np.std(sliding_window_view(statistics, MV_WINDOW), axis=-1, ddof=1)
    best = first_argmin(sd_profile)
    index = best + MV_WINDOW // 2
    logger.debug(f"MV bandwidth {grid[index]:.4g} (grid index {index}), sd={sd_profile[best]:.4g}")
    return MvSelection(
        bandwidth=float(grid[index]), index=index, grid=grid, statistics=statistics, sd_profile=sd_profile
    )


def hat_trace(grid: np.ndarray, b: float, kernel: KernelSpec = EPANECHNIKOV) -> float:
    l0, _ = smoother_weights(grid, grid, b, kernel)
    return float(np.trace(l0))


def gcv_criterion(values: np.ndarray, b: float, kernel: KernelSpec = EPANECHNIKOV) -> float:
    """(1/n) sum (y_i - yhat_i)^2 / (1 - tr(H_b)/n)^2, or inf when the denominator vanishes."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    grid = np.arange(1, n + 1) / n
    try:
        l0, _ = smoother_weights(grid, grid, b, kernel)
    except SingularFitError:
        return float("inf")
    fitted = np.sum(l0 * values[None, :], axis=1)
    share = np.trace(l0) / n
    if share >= 1.0 - 1e-12:
        return float("inf")
    return float(np.mean((values - fitted) ** 2) / (1.0 - share) ** 2)


def gcv_grid(n: int, size: int = GCV_SIZE, high: float = GCV_HIGH) -> np.ndarray:
    return np.geomspace((MIN_POINTS + 1e-9) / n, high, size)


def _gcv(values: np.ndarray, kernel: KernelSpec, size: int) -> GcvSelection:
    n = values.shape[0]
    if n < GCV_MIN_N:
        raise DataError(f"GCV needs at least {GCV_MIN_N} observations, got {n}")
    grid = gcv_grid(n, size)
    criterion = np.array([gcv_criterion(values, b, kernel) for b in grid])
    finite = np.isfinite(criterion)
    if not np.any(finite):
        raise DegenerateCriterionError(f"No admissible bandwidth on [{grid[0]:.4g}, {grid[-1]:.4g}]")
    spread = float(np.var(values))
    tolerance = TIE_FACTOR * (spread if spread > 0 else 1.0)
    best = float(np.min(criterion[finite]))
    index = int(np.flatnonzero(finite & (criterion <= best + tolerance))[-1])
    return GcvSelection(bandwidth=float(grid[index]), index=index, grid=grid, criterion=criterion)


def gcv_select(series: TimeSeries, kernel: KernelSpec = EPANECHNIKOV, size: int = GCV_SIZE) -> GcvSelection:
    """GCV bandwidth of the mean smoother; ties go to the largest bandwidth."""
    selection = _gcv(series.values, kernel, size)
    logger.debug(f"GCV mean bandwidth {selection.bandwidth:.4g}")
    return selection


def gcv_select_variance(res: Residuals, kernel: KernelSpec = EPANECHNIKOV, size: int = GCV_SIZE) -> GcvSelection:
    """GCV bandwidth c of the variance smoother applied to the squared residuals."""
    selection = _gcv(res.squared, kernel, size)
    logger.debug(f"GCV variance bandwidth {selection.bandwidth:.4g}")
    return selection
