import math
from typing import Sequence

import numpy as np

EPS = np.finfo(float).eps


def first_argmax(values: np.ndarray, atol: float = 0.0) -> int:
    """Smallest index whose value is within ``atol`` of the maximum."""
    values = np.asarray(values, dtype=float)
    best = values.max()
    return int(np.flatnonzero(values >= best - atol)[0])


def first_argmin(values: np.ndarray, atol: float = 0.0) -> int:
    values = np.asarray(values, dtype=float)
    best = values.min()
    return int(np.flatnonzero(values <= best + atol)[0])


def summation_tolerance(values: np.ndarray) -> float:
    """Bound on the rounding error accumulated by a left-to-right partial sum of ``values``."""
    values = np.asarray(values, dtype=float)
    return 8.0 * values.shape[0] * EPS * float(np.sum(np.abs(values)))


def order_statistic_rank(B: int, alpha: float) -> int:
    """The rank floor(B(1 - alpha)) of the bootstrap critical value, at least 1."""
    return max(1, math.floor(B * (1.0 - alpha) + 1e-9))


def derive_seed(master_seed: int, *keys: int) -> int:
    """A 64-bit seed for the sub-stream identified by ``keys`` under ``master_seed``."""
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def rng_for(master_seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(k) for k in keys)))


def level_key(level: float) -> str:
    """Stable dictionary key for a probability level, e.g. 0.95 -> "0.95"."""
    return f"{round(level, 10):g}"


def chunks(total: int, size: int) -> Sequence[range]:
    return [range(start, min(start + size, total)) for start in range(0, total, size)]
