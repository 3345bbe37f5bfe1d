from dataclasses import dataclass, field

import numpy as np

from secondchange.core.exception import DataError


@dataclass(frozen=True)
class TimeSeries:
    """Observations Y_1..Y_n on the implicit grid t_i = i/n."""

    values: np.ndarray
    name: str = "y"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise DataError(f"Expected a one-dimensional series, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0]) + 1
            raise DataError(f"Non-finite observation at position {bad}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def grid(self) -> np.ndarray:
        return np.arange(1, self.n + 1) / self.n

    def segment(self, start: int, stop: int, name: str = None) -> "TimeSeries":
        """Sub-series of positions start+1..stop (1-based, inclusive), re-gridded to its own length."""
        return TimeSeries(self.values[start:stop], name=name or self.name, meta=dict(self.meta))

    def __len__(self) -> int:
        return self.n
