from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict

import numpy as np
from numpy.polynomial.legendre import leggauss

from secondchange.core.settings import KERNEL_ID

QUADRATURE_NODES = 201

_PROFILES: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "epanechnikov": lambda x: 0.75 * (1.0 - x ** 2),
    "biweight": lambda x: (15.0 / 16.0) * (1.0 - x ** 2) ** 2,
    "triweight": lambda x: (35.0 / 32.0) * (1.0 - x ** 2) ** 3,
}


@lru_cache(maxsize=None)
def _gauss_legendre():
    return leggauss(QUADRATURE_NODES)


def _integrate(f: Callable[[np.ndarray], np.ndarray], low: float, high: float) -> float:
    if high <= low:
        return 0.0
    nodes, weights = _gauss_legendre()
    half = (high - low) / 2.0
    x = low + half * (nodes + 1.0)
    return float(half * np.sum(weights * f(x)))


@dataclass(frozen=True)
class KernelSpec:
    """Symmetric kernel supported on [-1, 1] with unit mass.

    Moments mu_l = int x^l K and phi_l = int x^l K^2 are cached; boundary
    moments nu_{j,b}(t) = int_{-t/b}^{(1-t)/b} x^j K(x) dx are computed on demand.
    """

    id: KERNEL_ID = "epanechnikov"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= 1.0
        return np.where(inside, _PROFILES[self.id](np.where(inside, x, 0.0)), 0.0)

    @lru_cache(maxsize=None)
    def mu(self, order: int) -> float:
        return _integrate(lambda x: x ** order * self(x), -1.0, 1.0)

    @lru_cache(maxsize=None)
    def phi(self, order: int) -> float:
        return _integrate(lambda x: x ** order * self(x) ** 2, -1.0, 1.0)

    def boundary_moment(self, order: int, t: float, b: float) -> float:
        low = max(-1.0, -t / b)
        high = min(1.0, (1.0 - t) / b)
        return _integrate(lambda x: x ** order * self(x), low, high)


EPANECHNIKOV = KernelSpec("epanechnikov")


def get_kernel(kernel_id: str) -> KernelSpec:
    return KernelSpec(kernel_id)
