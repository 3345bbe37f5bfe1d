from pathlib import Path
from typing import Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from secondchange.core.settings import KERNEL_ID

SUBCOMMAND = Literal[
    "test-variance",
    "test-correlation",
    "test-relevant-variance",
    "test-relevant-correlation",
    "locate",
    "bandwidth",
    "simulate",
    "simstudy",
    "schema",
]
DATA_COMMANDS = (
    "test-variance",
    "test-correlation",
    "test-relevant-variance",
    "test-relevant-correlation",
    "locate",
    "bandwidth",
)
RELEVANT_COMMANDS = ("test-relevant-variance", "test-relevant-correlation")

BandwidthChoice = Union[Literal["mv", "gcv"], float]
VarianceBandwidthChoice = Union[Literal["gcv"], float]


class RunConfig(BaseModel):
    """One CLI invocation.

    Each smoother has a single bandwidth field holding either a fixed value or
    the name of its selector; ``bandwidth=None`` means MV for the variance tests
    and GCV for the correlation tests.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    subcommand: SUBCOMMAND
    input: Optional[Path] = None
    column: Optional[str] = None
    lag: int = Field(default=1, ge=1)
    delta: Optional[float] = Field(default=None, gt=0.0)
    delta_grid: Optional[Tuple[float, ...]] = None
    deltas: Tuple[float, ...] = ()
    bandwidth: Optional[BandwidthChoice] = None
    variance_bandwidth: VarianceBandwidthChoice = "gcv"
    kernel: KERNEL_ID = "epanechnikov"
    window_m: Optional[int] = Field(default=None, ge=2)
    L: Optional[int] = Field(default=None, ge=1)
    zeta: Optional[float] = Field(default=None, gt=0.0, lt=0.5)
    B: int = Field(default=2000, ge=199)
    seed: int = 0
    alphas: Tuple[float, ...] = (0.10, 0.05)
    threads: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=250, ge=1)
    out: Optional[Path] = None
    format: Literal["json", "tsv"] = "json"
    segments: bool = False
    assume_no_variance_break: bool = False
    target: Literal["variance", "correlation", "relevant-variance", "relevant-correlation"] = "variance"
    model: Optional[str] = None
    lambdas: Tuple[float, ...] = (0.0,)
    n: int = Field(default=500, ge=8)
    runs: int = Field(default=2000, ge=1)
    bandwidths: Tuple[BandwidthChoice, ...] = ()

    @model_validator(mode="after")
    def _check_subcommand(self) -> "RunConfig":
        if self.subcommand in DATA_COMMANDS and self.input is None:
            raise ValueError(f"{self.subcommand} needs --input")
        if self.subcommand in RELEVANT_COMMANDS and self.delta is None and not self.delta_grid:
            raise ValueError(f"{self.subcommand} needs --delta or --delta-grid")
        if self.delta_grid is not None and any(not d > 0 for d in self.delta_grid):
            raise ValueError("Every delta of --delta-grid must be positive")
        if any(not d > 0 for d in self.deltas):
            raise ValueError("Every simstudy delta must be positive")
        if self.subcommand in ("simulate", "simstudy") and self.model is None:
            raise ValueError(f"{self.subcommand} needs --model")
        if self.subcommand == "simstudy" and self.runs < 100:
            raise ValueError(f"simstudy needs at least 100 runs, got {self.runs}")
        if any(not 0.0 < alpha < 1.0 for alpha in self.alphas):
            raise ValueError("Test levels must lie in (0, 1)")
        if isinstance(self.bandwidth, float) and not 0.0 < self.bandwidth <= 0.5:
            raise ValueError(f"Bandwidth {self.bandwidth} outside (0, 0.5]")
        return self

    def bandwidth_for(self, test: str) -> BandwidthChoice:
        if self.bandwidth is not None:
            return self.bandwidth
        return "mv" if test in ("variance", "relevant-variance") else "gcv"
