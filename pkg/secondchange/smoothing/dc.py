from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class MeanFit:
    mu_hat: np.ndarray
    mu_dot_hat: np.ndarray
    bandwidth: float
    kernel_id: str


@dataclass(frozen=True)
class Residuals:
    """Nonparametric residuals e_i = Y_i - mu_hat(t_i).

    ``series_variance`` is the sample variance of the observations the
    residuals came from; it sets the scale of the variance floor.
    """

    e_hat: np.ndarray
    bandwidth: float
    kernel_id: str
    series_variance: float

    @property
    def n(self) -> int:
        return self.e_hat.shape[0]

    @property
    def squared(self) -> np.ndarray:
        return self.e_hat ** 2

    def shifted(self, k: int) -> np.ndarray:
        """e_{i+k} for i = 1..n, with e_j = 0 whenever j > n."""
        out = np.zeros(self.n)
        if k < self.n:
            out[: self.n - k] = self.e_hat[k:]
        return out

    def scaled(self, factor: float) -> "Residuals":
        return Residuals(self.e_hat * factor, self.bandwidth, self.kernel_id, self.series_variance * factor ** 2)


@dataclass(frozen=True)
class VarianceFit:
    sigma2_hat: np.ndarray
    variant: Literal["smooth", "piecewise"]
    bandwidths: Tuple[float, float]
    kernel_id: str
    floor: float
    floor_applied: bool
    break_location: Optional[float] = None
    break_index: Optional[int] = None


@dataclass(frozen=True)
class LocatorResult:
    index: int
    fraction: float
    contrast: float
    L: int
    zeta: float
