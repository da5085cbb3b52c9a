# src/storage/label_file.py
"""Weak-label files: 1-based inclusive intervals, one behavior per row.

    # classes: feeding,preening
    start_index,end_index,behavior_class
    101,350,feeding
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from src.series_core.errors import IngestError, RowDiagnostic
from src.series_core.types import LabelInterval
from src.storage.directives import format_directives, read_directives
from src.storage.sensor_file import IngestReport, RowProblems, read_table

logger = logging.getLogger(__name__)

LABEL_COLUMNS = ["start_index", "end_index", "behavior_class"]


def parse_class_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _as_index(text: str) -> Optional[int]:
    text = text.strip()
    return int(text) if text.isdigit() else None


def read_label_file(
    path: Path,
    series_length: Optional[int] = None,
    classes: Optional[Sequence[str]] = None,
) -> Tuple[List[LabelInterval], IngestReport]:
    """Parse labels into 0-based intervals sorted by start.

    The file's ``# classes:`` directive, when present, declares the allowed
    classes; otherwise ``classes`` does (None accepts any class). Bounds are
    checked only when ``series_length`` is given.
    """
    path = Path(path)
    directives, skip = read_directives(path)
    declared = parse_class_list(directives["classes"]) if "classes" in directives else classes
    frame = read_table(path, skip).astype(str)
    header_line = skip + 1
    first_line = header_line + 1

    missing = [c for c in LABEL_COLUMNS if c not in frame.columns]
    if missing:
        raise IngestError(
            [RowDiagnostic(str(path), header_line, "missing_column", f"missing columns {missing}")]
        )

    problems = RowProblems(path)
    accepted: Dict[int, LabelInterval] = {}
    for offset, row in enumerate(frame[LABEL_COLUMNS].itertuples(index=False)):
        line = first_line + offset
        start, end = _as_index(row.start_index), _as_index(row.end_index)
        name = row.behavior_class.strip()
        if start is None or end is None:
            problems.add(line, "malformed_row", "start_index and end_index must be positive integers")
        elif not name or name == "nan":
            problems.add(line, "malformed_row", "behavior_class is empty")
        elif start < 1:
            problems.add(line, "label_out_of_range", f"start_index {start} is before the first sample")
        elif start > end:
            problems.add(line, "label_inverted", f"start_index {start} is after end_index {end}")
        elif series_length is not None and end > series_length:
            problems.add(
                line, "label_out_of_range", f"end_index {end} exceeds series length {series_length}"
            )
        elif declared is not None and name not in declared:
            problems.add(line, "unknown_class", f"class '{name}' is not declared (declared: {', '.join(declared)})")
        else:
            accepted[line] = LabelInterval(start_index=start - 1, end_index=end - 1, behavior_class=name)

    last_end: Dict[str, Tuple[int, int]] = {}
    for line, interval in sorted(accepted.items(), key=lambda kv: (kv[1].start_index, kv[0])):
        previous = last_end.get(interval.behavior_class)
        if previous is not None and interval.start_index <= previous[0]:
            problems.add(
                line,
                "label_overlap",
                f"'{interval.behavior_class}' interval overlaps the one on line {previous[1]}",
            )
            continue
        last_end[interval.behavior_class] = (interval.end_index, line)

    rows_read = len(frame)
    if problems:
        raise IngestError(problems.sorted(), rows_read=rows_read)
    labels = sorted(accepted.values(), key=lambda lab: (lab.start_index, lab.end_index, lab.behavior_class))
    report = IngestReport(path=str(path), rows_read=rows_read, rows_accepted=len(labels), columns=list(frame.columns))
    logger.info(f"Read {len(labels)} label intervals from {path}")
    return labels, report


def write_label_file(
    labels: Sequence[LabelInterval], path: Path, classes: Optional[Sequence[str]] = None
) -> None:
    path = Path(path)
    ordered = sorted(labels, key=lambda lab: (lab.start_index, lab.end_index, lab.behavior_class))
    frame = pd.DataFrame(
        {
            "start_index": [lab.start_index + 1 for lab in ordered],
            "end_index": [lab.end_index + 1 for lab in ordered],
            "behavior_class": [lab.behavior_class for lab in ordered],
        },
        columns=LABEL_COLUMNS,
    )
    with open(path, "w", encoding="utf-8", newline="") as handle:
        if classes:
            handle.write(format_directives([("classes", ",".join(classes))]))
        frame.to_csv(handle, index=False, lineterminator="\n")
    logger.info(f"Wrote {len(ordered)} label intervals to {path}")
