import json
import math
from dataclasses import dataclass
from typing import Dict, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from secondchange.core.numeric import level_key
from secondchange.core.settings import KERNEL_ID
from secondchange.cusum_tests.exception import BootstrapConfigError

VARIANCE_VARIANT = Literal["smooth", "piecewise"]


@dataclass(frozen=True)
class CusumSeries:
    """Summands of a CUSUM statistic with their left-to-right partial sums."""

    values: np.ndarray
    partial_sums: np.ndarray

    @classmethod
    def from_values(cls, values: np.ndarray) -> "CusumSeries":
        values = np.asarray(values, dtype=float)
        return cls(values=values, partial_sums=np.cumsum(values))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def drift(self) -> np.ndarray:
        """S_i - (i/n) S_n, exactly zero at i = n."""
        fractions = np.arange(1, self.n + 1) / self.n
        return self.partial_sums - fractions * self.partial_sums[-1]


@dataclass(frozen=True)
class WSequence:
    """Normalised residual products W_i = e_i e_{i+k} / sigma2(t_i)."""

    w: np.ndarray
    lag: int
    variance_variant: str


class BootstrapConfig(BaseModel):
    """Wild bootstrap settings.

    Args:
        m (int, optional): Window length; floor(n^(1/3)) when omitted.
        B (int): Number of replicates, at least 199.
        seed (int): Master seed of the multiplier streams.
        alphas (tuple): Test levels.
        threads (int): Worker count; results do not depend on it.
        chunk_size (int): Replicates per parallel job.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    m: Optional[int] = Field(default=None, ge=2)
    B: int = Field(default=2000, ge=199)
    seed: int = 0
    alphas: Tuple[float, ...] = (0.10, 0.05)
    threads: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=250, ge=1)

    def window(self, n: int) -> int:
        m = self.m if self.m is not None else max(2, int(math.floor(n ** (1.0 / 3.0) + 1e-9)))
        if not 2 <= m < n / 2:
            raise BootstrapConfigError(f"Window m={m} must satisfy 2 <= m < n/2 (n={n})")
        return m


class Tuning(BaseModel):
    """Resolved smoothing parameters of one test run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    b: float = Field(gt=0.0, le=0.5)
    c: Optional[float] = Field(default=None, gt=0.0, le=0.5)
    kernel: KERNEL_ID = "epanechnikov"
    L: Optional[int] = Field(default=None, ge=1)
    zeta: Optional[float] = Field(default=None, gt=0.0, lt=0.5)
    bandwidth_source: str = "fixed"
    variance_bandwidth_source: Optional[str] = None


class TuningRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    b_n: float
    c_n: Optional[float] = None
    m: int
    L: Optional[int] = None
    zeta: Optional[float] = None
    kernel: str
    B: int
    seed: int
    lag: Optional[int] = None
    variance_variant: Optional[VARIANCE_VARIANT] = None
    bandwidth_source: str = "fixed"
    variance_bandwidth_source: Optional[str] = None


class LocatorRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    method: Literal["window-contrast", "cusum-argmax-variance", "cusum-argmax-correlation"]
    index: int
    fraction: float
    value: float


class TestReport(BaseModel):
    """Outcome of a classical change point test.

    ``critical_values`` are keyed by the quantile level (e.g. "0.95"),
    ``decisions`` by the test level (e.g. "0.05").
    """

    __test__ = False
    model_config = ConfigDict(extra="forbid")

    test: Literal["variance", "correlation"]
    n: int
    statistic: float
    critical_values: Dict[str, float]
    p_value: float = Field(ge=0.0, le=1.0)
    decisions: Dict[str, bool]
    tuning: TuningRecord
    locator: Optional[LocatorRecord] = None
    floor_applied: Optional[bool] = None
    bootstrap_mean: float
    bootstrap_sd: float

    def reject(self, alpha: float) -> bool:
        return self.decisions[level_key(alpha)]

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    def to_bytes(self) -> bytes:
        return json.dumps(self.to_dict()).encode("utf-8")


class SegmentReport(BaseModel):
    """Whole / before / after runs of the same classical test."""

    model_config = ConfigDict(extra="forbid")

    test: Literal["variance", "correlation"]
    split_index: int
    split_fraction: float
    whole: TestReport
    before: TestReport
    after: TestReport

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
