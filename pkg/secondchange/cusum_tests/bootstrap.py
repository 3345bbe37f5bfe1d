import logging
from typing import Callable

import numpy as np
from joblib import Parallel, delayed

from secondchange.core.exception import DimensionMismatchError
from secondchange.core.numeric import chunks, rng_for
from secondchange.cusum_tests.dc import BootstrapConfig
from secondchange.cusum_tests.exception import BootstrapConfigError

MULTIPLIER_STREAM = 1


def bootstrap_phi(values: np.ndarray, m: int, R: np.ndarray) -> np.ndarray:
    """Multiplier partial sums of centred window sums.

    Phi_i = (m (n-m+1))^{-1/2} sum_{j<=i} (S_{j,m} - (m/n) S_n) R_j for i = 1..n-m+1,
    with S_{j,m} the sum of ``values`` over j..j+m-1. ``R`` may hold one
    multiplier sequence or a matrix with one sequence per row.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if not 1 <= m <= n:
        raise BootstrapConfigError(f"Window m={m} outside 1..{n}")
    windows = n - m + 1
    R = np.asarray(R, dtype=float)
    if R.shape[-1] != windows:
        raise DimensionMismatchError(f"Expected {windows} multipliers per replicate, got {R.shape[-1]}")
    cumulative = np.concatenate([[0.0], np.cumsum(values)])
    total = cumulative[-1]
    window_sums = cumulative[m:] - cumulative[:windows]
    centred = window_sums - m / n * total
    return np.cumsum(centred * R, axis=-1) / np.sqrt(m * windows)


def bridge(phi: np.ndarray) -> np.ndarray:
    """Phi_i - (i/N) Phi_N along the last axis, N = len(phi)."""
    size = phi.shape[-1]
    fractions = np.arange(1, size + 1) / size
    return phi - fractions * phi[..., -1:]


def bootstrap_max_statistic(phi: np.ndarray, m: int, n: int) -> np.ndarray:
    """max over m+1 <= i <= n-m+1 of |Phi_i - i/(n-m+1) Phi_{n-m+1}|."""
    windows = n - m + 1
    if phi.shape[-1] != windows:
        raise DimensionMismatchError(f"Expected {windows} partial sums, got {phi.shape[-1]}")
    if windows < m + 1:
        raise BootstrapConfigError(f"Empty maximisation range m+1..n-m+1 for n={n}, m={m}")
    return np.max(np.abs(bridge(phi)[..., m:]), axis=-1)


class BootstrapEngine:
    """Runs B wild bootstrap replicates in fixed chunks.

    Replicate r draws its multipliers from the sub-stream (seed, r), so the
    sample is the same for every thread count.
    """

    def __init__(self, cfg: BootstrapConfig, logger: logging.Logger = logging.getLogger(__name__)) -> None:
        self.cfg = cfg
        self.logger = logger

    def _multipliers(self, replicates: range, windows: int) -> np.ndarray:
        return np.stack(
            [rng_for(self.cfg.seed, MULTIPLIER_STREAM, r).standard_normal(windows) for r in replicates]
        )

    def _chunk(self, values: np.ndarray, m: int, replicates: range, reducer: Callable) -> np.ndarray:
        R = self._multipliers(replicates, values.shape[0] - m + 1)
        return reducer(bootstrap_phi(values, m, R))

    def sample(self, values: np.ndarray, m: int, reducer: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Bootstrap sample of ``reducer`` applied to the multiplier partial sums.

        Args:
            values (np.ndarray): Summands (squared residuals, W or centred variants).
            m (int): Window length.
            reducer (Callable): Maps a (replicates, n-m+1) block of Phi to one value per row.

        Returns:
            np.ndarray: B replicate values in replicate order.
        """
        parts = Parallel(n_jobs=self.cfg.threads, prefer="threads")(
            delayed(self._chunk)(values, m, replicates, reducer)
            for replicates in chunks(self.cfg.B, self.cfg.chunk_size)
        )
        sample = np.concatenate(parts)
        self.logger.debug(f"Bootstrap B={self.cfg.B} m={m}: mean={sample.mean():.4g} sd={sample.std(ddof=1):.4g}")
        return sample
