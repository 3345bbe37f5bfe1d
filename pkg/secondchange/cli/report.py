import sys
from pathlib import Path
from typing import Optional

import pandas as pd

from secondchange.cli.dc import ReportDocument


def _segment_table(document: ReportDocument) -> pd.DataFrame:
    rows = []
    for name in ("whole", "before", "after"):
        part = getattr(document.segments, name)
        row = {"segment": name, "n": part.n, "statistic": part.statistic}
        row.update({f"v*{level}": value for level, value in part.critical_values.items()})
        row.update({"b_n": part.tuning.b_n, "m": part.tuning.m, "c_n": part.tuning.c_n, "p_value": part.p_value})
        rows.append(row)
    return pd.DataFrame(rows)


def _curve_table(document: ReportDocument) -> pd.DataFrame:
    rows = []
    for point in document.curve.points:
        row = {"delta": point.delta, "p_value": point.p_value}
        row.update({f"reject_{alpha}": decision for alpha, decision in point.decisions.items()})
        rows.append(row)
    return pd.DataFrame(rows)


def to_frame(document: ReportDocument) -> pd.DataFrame:
    """Tabular view: study rows, the delta/p-value curve, the segment table, or key/value pairs."""
    if document.study is not None:
        return pd.DataFrame([row.model_dump() for row in document.study.rows])
    if document.curve is not None:
        return _curve_table(document)
    if document.segments is not None:
        return _segment_table(document)
    flat = pd.json_normalize(document.to_dict(), sep=".")
    return flat.T.reset_index().set_axis(["key", "value"], axis=1)


def write_bytes(payload: bytes, out: Optional[Path] = None) -> None:
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(payload)


def write_report(document: ReportDocument, out: Optional[Path] = None, fmt: str = "json") -> None:
    if fmt == "json":
        payload = document.to_bytes()
    else:
        payload = to_frame(document).to_csv(sep="\t", index=False, lineterminator="\n").encode("utf-8")
    write_bytes(payload, out)
