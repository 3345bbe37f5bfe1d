import math

import numpy as np
from loguru import logger

from secondchange.core.numeric import first_argmax, summation_tolerance
from secondchange.smoothing.dc import LocatorResult, Residuals
from secondchange.smoothing.exception import LocatorWindowError

DEFAULT_ZETA = 0.016


def default_locator_params(n: int, zeta: float = None, L: int = None):
    """L = floor(n^(1/3)) and zeta = 0.016, raised to L/n when the trim would be shorter than the window."""
    if L is None:
        L = max(1, int(math.floor(n ** (1.0 / 3.0) + 1e-9)))
    if zeta is None:
        zeta = max(DEFAULT_ZETA, L / n)
    return L, zeta


def variance_break_locate(res: Residuals, L: int, zeta: float) -> LocatorResult:
    """Windowed contrast locator of a break in the variance.

    M(i) = (sum_{j=i-L+1}^{i} e_j^2 - sum_{j=i}^{i+L-1} e_j^2) / L is maximised in
    absolute value over floor(n zeta) <= i <= n - floor(n zeta) + 1; the smallest
    maximising index wins.
    """
    n = res.n
    if not 0.0 < zeta < 0.5:
        raise LocatorWindowError(f"Trim zeta={zeta} outside (0, 0.5)")
    trim = int(math.floor(n * zeta + 1e-9))
    low, high = trim, n - trim + 1
    if L < 1 or trim < L or low > high:
        raise LocatorWindowError(f"Window L={L} exceeds the trimmed range floor(n*zeta)={trim} (n={n})")
    squared = res.squared
    cumulative = np.concatenate([[0.0], np.cumsum(squared)])
    i = np.arange(low, high + 1)
    left = cumulative[i] - cumulative[i - L]
    right = cumulative[i + L - 1] - cumulative[i - 1]
    contrast = (left - right) / L
    best = first_argmax(np.abs(contrast), atol=summation_tolerance(squared) / L)
    index = int(i[best])
    logger.debug(f"Variance break located at i*={index} (t*={index / n:.4f}), |M|={abs(contrast[best]):.4g}")
    return LocatorResult(index=index, fraction=index / n, contrast=float(contrast[best]), L=L, zeta=zeta)
