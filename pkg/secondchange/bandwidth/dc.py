from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MvSelection:
    """Minimal Volatility choice with the statistic path and its rolling sd profile.

    ``sd_profile[j]`` belongs to grid index ``j + 3`` (0-based), the centre of its window.
    """

    bandwidth: float
    index: int
    grid: np.ndarray
    statistics: np.ndarray
    sd_profile: np.ndarray


@dataclass(frozen=True)
class GcvSelection:
    bandwidth: float
    index: int
    grid: np.ndarray
    criterion: np.ndarray
