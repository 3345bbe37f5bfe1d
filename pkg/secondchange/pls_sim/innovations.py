import numpy as np


class InnovationStream:
    """Standard normal innovations eps_i indexed by any integer i.

    Observation-time innovations eps_1, eps_2, ... and the pre-sample history
    eps_0, eps_-1, ... come from two independent child streams of the master
    seed, each drawn in index order, so a given eps_i does not depend on how
    much history or how many observations are requested.
    """

    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)
        sample, history = np.random.SeedSequence(self.master_seed).spawn(2)
        self._sample_seed = sample
        self._history_seed = history

    def window(self, history: int, n: int) -> np.ndarray:
        """Innovations eps_{1-history}..eps_n as one array, oldest first."""
        future = np.random.default_rng(self._sample_seed).standard_normal(n)
        past = np.random.default_rng(self._history_seed).standard_normal(history)
        return np.concatenate([past[::-1], future])
