from typing import Tuple

import numpy as np
from loguru import logger

from secondchange.core.exception import DimensionMismatchError
from secondchange.core.series import TimeSeries
from secondchange.smoothing.dc import MeanFit, Residuals, VarianceFit
from secondchange.smoothing.exception import BandwidthError, DegenerateSegmentError, SingularFitError
from secondchange.smoothing.kernel import EPANECHNIKOV, KernelSpec

FLOOR_FACTOR = 1e-8
MIN_POINTS = 3


def check_bandwidth(n: int, b: float, name: str = "b") -> None:
    if not 0.0 < b <= 0.5:
        raise BandwidthError(f"Bandwidth {name}={b} outside (0, 0.5]")
    if n * b < MIN_POINTS:
        raise BandwidthError(f"Bandwidth {name}={b} too small for n={n}: need n*{name} >= {MIN_POINTS}")


def smoother_weights(
        grid: np.ndarray, points: np.ndarray, b: float, kernel: KernelSpec = EPANECHNIKOV
) -> Tuple[np.ndarray, np.ndarray]:
    """Rows of the local linear smoother.

    Args:
        grid (np.ndarray): Design points t_j.
        points (np.ndarray): Evaluation points t.
        b (float): Bandwidth.
        kernel (KernelSpec): Kernel.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Matrices L0, L1 of shape (len(points), len(grid)) with
        intercept(t) = sum_j L0[t, j] y_j and slope(t) = sum_j L1[t, j] y_j.

    Raises:
        SingularFitError: If the 2x2 weighted normal matrix is singular at some point.
    """
    d = grid[None, :] - points[:, None]
    w = kernel(d / b)
    s0 = np.sum(w, axis=1)
    s1 = np.sum(w * d, axis=1)
    s2 = np.sum(w * d ** 2, axis=1)
    det = s0 * s2 - s1 ** 2
    singular = ~(det > 1e-12 * np.maximum(s0 * s2, np.finfo(float).tiny))
    if np.any(singular):
        where = float(points[np.flatnonzero(singular)[0]])
        raise SingularFitError(f"Singular normal equations at t={where:.6g} (bandwidth {b})")
    l0 = w * (s2[:, None] - s1[:, None] * d) / det[:, None]
    l1 = w * (s0[:, None] * d - s1[:, None]) / det[:, None]
    return l0, l1


def _apply(weights: np.ndarray, values: np.ndarray) -> np.ndarray:
    return np.sum(weights * values[None, :], axis=1)


def local_linear_fit(series: TimeSeries, b: float, kernel: KernelSpec = EPANECHNIKOV) -> MeanFit:
    """Local linear estimate of the mean function and its slope at every t_i."""
    check_bandwidth(series.n, b)
    grid = series.grid
    l0, l1 = smoother_weights(grid, grid, b, kernel)
    return MeanFit(
        mu_hat=_apply(l0, series.values),
        mu_dot_hat=_apply(l1, series.values),
        bandwidth=b,
        kernel_id=kernel.id,
    )


def residuals(series: TimeSeries, fit: MeanFit) -> Residuals:
    if fit.mu_hat.shape[0] != series.n:
        raise DimensionMismatchError(f"Fit has {fit.mu_hat.shape[0]} points, series has {series.n}")
    return Residuals(
        e_hat=series.values - fit.mu_hat,
        bandwidth=fit.bandwidth,
        kernel_id=fit.kernel_id,
        series_variance=float(np.var(series.values, ddof=1)) if series.n > 1 else 0.0,
    )


def variance_floor(res: Residuals) -> float:
    scale = res.series_variance if res.series_variance > 0 else 1.0
    return FLOOR_FACTOR * scale


def _fit_segment(grid: np.ndarray, values: np.ndarray, c: float, kernel: KernelSpec) -> np.ndarray:
    l0, _ = smoother_weights(grid, grid, c, kernel)
    return _apply(l0, values)


def variance_fit_smooth(res: Residuals, c: float, b: float = None, kernel: KernelSpec = EPANECHNIKOV) -> VarianceFit:
    """Local linear fit of the squared residuals with bandwidth c, floored below."""
    check_bandwidth(res.n, c, "c")
    floor = variance_floor(res)
    grid = np.arange(1, res.n + 1) / res.n
    raw = _fit_segment(grid, res.squared, c, kernel)
    floor_applied = bool(np.any(raw < floor))
    if floor_applied:
        logger.debug(f"Variance floor {floor:.3g} applied at {int(np.sum(raw < floor))} points")
    return VarianceFit(
        sigma2_hat=np.maximum(raw, floor),
        variant="smooth",
        bandwidths=(c, res.bandwidth if b is None else b),
        kernel_id=kernel.id,
        floor=floor,
        floor_applied=floor_applied,
    )


def variance_fit_piecewise(
        res: Residuals, t_star: float, c: float, kernel: KernelSpec = EPANECHNIKOV
) -> VarianceFit:
    """Separate local linear variance fits before and after the variance break t_star.

    The segments are 1..floor(n t_star) and floor(n t_star)+1..n; each keeps the
    distances of the original grid, so kernel windows truncate at the segment edge.
    t_star = 1 means no break and reproduces the smooth fit.
    """
    n = res.n
    check_bandwidth(n, c, "c")
    split = int(np.floor(n * t_star + 1e-9))
    grid = np.arange(1, n + 1) / n
    values = res.squared
    minimum = max(MIN_POINTS, int(np.ceil(n * c)))
    if split >= n:
        segments = [(0, n)]
    else:
        segments = [(0, split), (split, n)]
        for start, stop in segments:
            if stop - start < minimum:
                raise DegenerateSegmentError(
                    f"Segment {start + 1}..{stop} has {stop - start} points, need {minimum} (t*={t_star})"
                )
    raw = np.concatenate([_fit_segment(grid[start:stop], values[start:stop], c, kernel) for start, stop in segments])
    floor = variance_floor(res)
    return VarianceFit(
        sigma2_hat=np.maximum(raw, floor),
        variant="piecewise",
        bandwidths=(c, res.bandwidth),
        kernel_id=kernel.id,
        floor=floor,
        floor_applied=bool(np.any(raw < floor)),
        break_location=min(float(t_star), 1.0),
        break_index=min(split, n),
    )
