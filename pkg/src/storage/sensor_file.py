# src/storage/sensor_file.py
"""Delimited accelerometer recordings.

    # sample_rate_hz: 100.0
    sample_index,x,y,z
    1,0.012,-0.98,0.11
    ...

The index column is either ``sample_index`` (1-based, step 1) or
``timestamp`` (seconds, step 1/rate). Values are written with the shortest
round-trip representation so a write/read cycle is bit-exact.
"""
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.config import DEFAULT_SAMPLE_RATE_HZ
from src.series_core.errors import IngestError, RowDiagnostic
from src.series_core.types import Axis, MultiAxisSeries
from src.storage.directives import format_directives, read_directives

logger = logging.getLogger(__name__)

AXIS_COLUMNS = {"x": Axis.X, "y": Axis.Y, "z": Axis.Z}
INDEX_COLUMNS = ("sample_index", "timestamp")
TIMESTAMP_TOLERANCE_S = 1e-6


class IngestReport(BaseModel):
    """Row accounting for one ingested file: rows_read = rows_accepted + rejected."""

    model_config = ConfigDict(frozen=True)

    path: str
    rows_read: int
    rows_accepted: int
    columns: List[str]


class RowProblems:
    """First diagnostic per line; later problems on the same line are dropped."""

    def __init__(self, path: Path):
        self.path = str(path)
        self._by_line: Dict[int, RowDiagnostic] = {}

    def add(self, line: int, code: str, message: str) -> None:
        if line not in self._by_line:
            self._by_line[line] = RowDiagnostic(self.path, line, code, message)

    def add_many(self, lines: Iterable[int], code: str, message: str) -> None:
        for line in lines:
            self.add(int(line), code, message)

    def __len__(self) -> int:
        return len(self._by_line)

    def sorted(self) -> List[RowDiagnostic]:
        return [self._by_line[k] for k in sorted(self._by_line)]


def parse_sample_rate(directives: Dict[str, str], path: Path) -> float:
    text = directives.get("sample_rate_hz")
    if text is None:
        return DEFAULT_SAMPLE_RATE_HZ
    try:
        rate = float(text)
    except ValueError:
        rate = math.nan
    if not (math.isfinite(rate) and rate > 0):
        raise IngestError([RowDiagnostic(str(path), 1, "bad_directive", f"sample_rate_hz must be a positive number, got '{text}'")])
    return rate


def field_count_problems(path: Path, header_line: int, expected: int) -> List[RowDiagnostic]:
    """Rows whose comma-separated field count differs from the header's."""
    problems = []
    with open(path, "r", encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if number <= header_line:
                continue
            got = line.rstrip("\r\n").count(",") + 1
            if got != expected:
                problems.append(
                    RowDiagnostic(str(path), number, "malformed_row", f"expected {expected} fields, got {got}")
                )
    return problems


def read_table(path: Path, skip: int) -> pd.DataFrame:
    """CSV body after ``skip`` directive lines; every cell kept as text or float."""
    try:
        frame = pd.read_csv(
            path,
            skiprows=skip,
            float_precision="round_trip",
            keep_default_na=False,
            na_values=[],
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        raise IngestError([RowDiagnostic(str(path), skip + 1, "missing_column", "file has no header row")])
    except pd.errors.ParserError:
        expected = len(_header_fields(path, skip))
        raise IngestError(field_count_problems(path, skip + 1, expected))
    frame.columns = [str(c).strip().lower() for c in frame.columns]
    return frame


def _header_fields(path: Path, skip: int) -> List[str]:
    with open(path, "r", encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if number == skip + 1:
                return line.rstrip("\r\n").split(",")
    return []


def numeric_column(
    frame: pd.DataFrame, column: str, first_line: int, problems: RowProblems
) -> np.ndarray:
    """Column as float64; unparseable cells are malformed, NaN/inf are non-finite."""
    raw = frame[column]
    if pd.api.types.is_float_dtype(raw) or pd.api.types.is_integer_dtype(raw):
        values = raw.to_numpy(dtype=np.float64)
        missing = np.zeros(values.size, dtype=bool)
        unparsed = np.zeros(values.size, dtype=bool)
    else:
        text = raw.astype(str).str.strip()
        values = pd.to_numeric(text, errors="coerce").to_numpy(dtype=np.float64)
        missing = ((text == "") | raw.isna()).to_numpy()
        literal_nan = text.str.lower().isin(["nan", "-nan", "+nan"]).to_numpy()
        unparsed = np.isnan(values) & ~missing & ~literal_nan
    lines = first_line + np.arange(values.size)
    problems.add_many(lines[missing], "malformed_row", f"missing value in column '{column}'")
    problems.add_many(lines[unparsed], "malformed_row", f"column '{column}' is not a number")
    bad = ~np.isfinite(values) & ~missing & ~unparsed
    problems.add_many(lines[bad], "non_finite", f"column '{column}' is NaN or infinite")
    return values


def check_index(
    index: np.ndarray, column: str, rate: float, first_line: int, problems: RowProblems
) -> None:
    lines = first_line + np.arange(index.size)
    if index.size == 0:
        return
    if column == "sample_index":
        fractional = np.isfinite(index) & (index != np.round(index))
        problems.add_many(lines[fractional], "malformed_row", "sample_index must be an integer")
        if np.isfinite(index[0]) and index[0] != 1:
            problems.add(int(lines[0]), "irregular_spacing", f"sample_index must start at 1, got {index[0]:g}")
        expected_step, tolerance = 1.0, 0.0
    else:
        expected_step, tolerance = 1.0 / rate, TIMESTAMP_TOLERANCE_S
    step = np.diff(index)
    valid = np.isfinite(step)
    backwards = valid & (step <= 0)
    problems.add_many(lines[1:][backwards], "non_monotone_index", f"{column} does not increase")
    irregular = valid & ~backwards & (np.abs(step - expected_step) > tolerance)
    problems.add_many(
        lines[1:][irregular], "irregular_spacing", f"{column} step differs from {expected_step:g}"
    )


def read_sensor_file(path: Path) -> Tuple[MultiAxisSeries, IngestReport]:
    """Parse and validate a recording; every rejected row is itemized in one IngestError."""
    path = Path(path)
    directives, skip = read_directives(path)
    rate = parse_sample_rate(directives, path)
    frame = read_table(path, skip)
    header_line = skip + 1
    first_line = header_line + 1

    index_columns = [c for c in frame.columns if c in INDEX_COLUMNS]
    axis_columns = [c for c in frame.columns if c in AXIS_COLUMNS]
    unknown = [c for c in frame.columns if c not in INDEX_COLUMNS and c not in AXIS_COLUMNS]
    header_problems = []
    if len(index_columns) != 1:
        header_problems.append(f"expected exactly one of {', '.join(INDEX_COLUMNS)}")
    if not axis_columns:
        header_problems.append("expected at least one of x, y, z")
    if unknown:
        header_problems.append(f"unknown columns {unknown}")
    if header_problems:
        raise IngestError(
            [RowDiagnostic(str(path), header_line, "missing_column", "; ".join(header_problems))]
        )

    problems = RowProblems(path)
    index = numeric_column(frame, index_columns[0], first_line, problems)
    arrays = {AXIS_COLUMNS[c]: numeric_column(frame, c, first_line, problems) for c in axis_columns}
    check_index(index, index_columns[0], rate, first_line, problems)

    rows_read = len(frame)
    if problems:
        diagnostics = problems.sorted()
        logger.warning(f"{path}: rejected {len(diagnostics)} of {rows_read} rows")
        raise IngestError(diagnostics, rows_read=rows_read)
    if rows_read == 0:
        raise IngestError([RowDiagnostic(str(path), header_line, "no_samples", "file has no data rows")], rows_read=0)

    series = MultiAxisSeries.from_arrays(arrays, sample_rate_hz=rate)
    report = IngestReport(path=str(path), rows_read=rows_read, rows_accepted=rows_read, columns=list(frame.columns))
    logger.info(f"Read {rows_read} samples on axes {[a.value for a in series.axis_ids]} at {rate} Hz from {path}")
    return series, report


def write_sensor_file(
    series: MultiAxisSeries, path: Path, provenance: Optional[Iterable[Tuple[str, object]]] = None
) -> None:
    path = Path(path)
    frame = pd.DataFrame({"sample_index": np.arange(1, series.length + 1)})
    for axis, ts in series.axes.items():
        frame[axis.value.lower()] = ts.values
    header = [("sample_rate_hz", repr(float(series.sample_rate_hz)))] + list(provenance or [])
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(format_directives(header))
        frame.to_csv(handle, index=False, lineterminator="\n")
    logger.info(f"Wrote {series.length} samples to {path}")
