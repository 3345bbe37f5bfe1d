import json
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from secondchange.core.numeric import level_key
from secondchange.cusum_tests.dc import LocatorRecord, TuningRecord


class ChangePointEstimate(BaseModel):
    """CUSUM-argmax change point; ``fraction`` = index / n."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    index: int = Field(ge=1)
    fraction: float = Field(gt=0.0, le=1.0)
    objective: float
    target: Literal["variance", "correlation"]
    lag: Optional[int] = None


class DeltaEstimate(BaseModel):
    """Levels before and after the change point; ``delta`` = after - before."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    before: float
    after: float
    delta: float

    @classmethod
    def from_levels(cls, before: float, after: float) -> "DeltaEstimate":
        return cls(before=before, after=after, delta=after - before)

    @model_validator(mode="after")
    def _check_difference(self) -> "DeltaEstimate":
        if self.delta != self.after - self.before:
            raise ValueError("delta must equal after - before")
        return self


class RelevantTestReport(BaseModel):
    """Outcome of a test of a relevant change |Delta| <= delta.

    ``quantiles`` hold the bootstrap order statistics M_(floor(B(1-alpha))) keyed by
    quantile level; ``thresholds`` the rejection bounds delta^2 + M delta / sqrt(n).
    """

    model_config = ConfigDict(extra="forbid")

    test: Literal["relevant-variance", "relevant-correlation"]
    n: int
    statistic: float = Field(ge=0.0)
    delta_threshold: float = Field(gt=0.0)
    delta_estimate: DeltaEstimate
    change_point: ChangePointEstimate
    quantiles: Dict[str, float]
    thresholds: Dict[str, float]
    decisions: Dict[str, bool]
    p_value: float = Field(ge=0.0, le=1.0)
    tuning: TuningRecord
    variance_locator: Optional[LocatorRecord] = None
    floor_applied: Optional[bool] = None
    bootstrap_mean: float
    bootstrap_sd: float

    def reject(self, alpha: float) -> bool:
        return self.decisions[level_key(alpha)]

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    def to_bytes(self) -> bytes:
        return json.dumps(self.to_dict()).encode("utf-8")


class CurvePoint(BaseModel):
    model_config = ConfigDict(extra="forbid")

    delta: float
    p_value: float
    decisions: Dict[str, bool]


class PValueCurve(BaseModel):
    """p-values of one relevant test over a grid of thresholds."""

    model_config = ConfigDict(extra="forbid")

    test: Literal["relevant-variance", "relevant-correlation"]
    statistic: float
    points: List[CurvePoint]

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
