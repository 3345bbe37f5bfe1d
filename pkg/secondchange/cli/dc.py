import json
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from secondchange.cusum_tests.dc import LocatorRecord, SegmentReport, TestReport
from secondchange.relevant_tests.dc import PValueCurve, RelevantTestReport


class Provenance(BaseModel):
    """Where a report came from. Timestamps stay null unless enabled in the runtime settings."""

    model_config = ConfigDict(extra="forbid")

    package: str = "secondchange"
    version: str
    subcommand: str
    seed: int
    input: Optional[str] = None
    column: Optional[str] = None
    started: Optional[str] = None
    finished: Optional[str] = None


class LocateReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int
    b_n: float
    c_n: float
    lag: int
    locators: List[LocatorRecord]


class SelectionRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    method: str
    smoother: str
    bandwidth: float
    grid: List[float]
    values: List[float]
    sd_profile: Optional[List[float]] = None


class BandwidthReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int
    target: str
    selections: List[SelectionRecord]


class StudyRow(BaseModel):
    """Empirical rejection frequency of one (model, lambda, bandwidth, alpha) cell."""

    model_config = ConfigDict(extra="forbid")

    model: str
    lam: float
    n: int
    test: str
    bandwidth: str
    delta: Optional[float] = None
    alpha: float
    runs: int
    failed: int
    rejections: int
    rate: Optional[float] = None
    se: Optional[float] = None


class StudyTable(BaseModel):
    model_config = ConfigDict(extra="forbid")

    B: int
    rows: List[StudyRow]


class ReportDocument(BaseModel):
    """Top-level JSON document written by every subcommand except ``simulate``."""

    model_config = ConfigDict(extra="forbid")

    provenance: Provenance
    report: Optional[TestReport] = None
    relevant: Optional[RelevantTestReport] = None
    segments: Optional[SegmentReport] = None
    curve: Optional[PValueCurve] = None
    locate: Optional[LocateReport] = None
    bandwidth: Optional[BandwidthReport] = None
    study: Optional[StudyTable] = None

    def to_dict(self) -> dict:
        return self.model_dump(mode="json", exclude_none=False)

    def to_bytes(self) -> bytes:
        return (json.dumps(self.to_dict(), indent=2) + "\n").encode("utf-8")

    @classmethod
    def schema_bytes(cls) -> bytes:
        return (json.dumps(cls.model_json_schema(), indent=2) + "\n").encode("utf-8")
