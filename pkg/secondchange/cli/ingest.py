import re
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from loguru import logger

from secondchange.cli.exception import IngestError
from secondchange.core.series import TimeSeries

HEADER_LINES = 1


def _select_column(frame: pd.DataFrame, column: Union[str, int, None]) -> str:
    if column is None:
        return frame.columns[0]
    if column in frame.columns:
        return column
    if isinstance(column, int) or str(column).isdigit():
        position = int(column)
        if position < len(frame.columns):
            return frame.columns[position]
    raise IngestError(f"Column {column!r} not found; available: {', '.join(map(str, frame.columns))}")


def ingest(path: Union[str, Path], column: Union[str, int, None] = None) -> TimeSeries:
    """Reads one numeric column of a CSV file with a header row, in time order.

    Args:
        path: CSV file.
        column: Header name or 0-based position; the first column when omitted.

    Raises:
        IngestError: Unparsable or empty file, non-numeric or non-finite cell.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as ex:
        raise IngestError(f"Input file {path} does not exist", exception=ex)
    except pd.errors.EmptyDataError as ex:
        raise IngestError(f"Input file {path} is empty", exception=ex)
    except pd.errors.ParserError as ex:
        match = re.search(r"line (\d+)", str(ex))
        line = int(match.group(1)) if match else None
        raise IngestError(f"Cannot parse {path}: {ex}", line=line, exception=ex)
    if frame.empty:
        raise IngestError(f"Input file {path} has a header but no rows")
    name = _select_column(frame, column)
    raw = frame[name].str.strip()
    values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row = int(bad[0])
        line = row + 1 + HEADER_LINES
        raise IngestError(f"Non-numeric or non-finite value {raw.iloc[row]!r} in column {name!r} at line {line}", line=line)
    logger.debug(f"Read {values.shape[0]} observations of {name!r} from {path}")
    return TimeSeries(values, name=str(name), meta={"input": str(path), "column": str(name)})
