# src/storage/events_file.py
"""Match-event files with provenance headers.

    # command: match
    # dictionary: dict.json
    behavior_class,start_index,start_time_s,length,distance_X,distance_Y,distance_Z
    feeding,1201,12.000000,80,0.812345678,,1.023456789
"""
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from src.matcher.models import MatchEvent
from src.series_core.errors import IngestError, RowDiagnostic
from src.series_core.types import ALL_AXES
from src.storage.directives import format_directives, read_directives
from src.storage.sensor_file import RowProblems, numeric_column, read_table

logger = logging.getLogger(__name__)

DISTANCE_COLUMNS = {axis: f"distance_{axis.value}" for axis in ALL_AXES}
EVENT_COLUMNS = ["behavior_class", "start_index", "start_time_s", "length"] + list(DISTANCE_COLUMNS.values())


def events_frame(events: Sequence[MatchEvent]) -> pd.DataFrame:
    """Events as text cells in the on-disk layout (1-based start index)."""
    rows = []
    for event in events:
        row = {
            "behavior_class": event.behavior_class,
            "start_index": str(event.start_index + 1),
            "start_time_s": f"{event.start_time_s:.6f}",
            "length": str(event.length),
        }
        for axis, column in DISTANCE_COLUMNS.items():
            distance = event.per_axis_distance.get(axis)
            row[column] = "" if distance is None else f"{distance:.9f}"
        rows.append(row)
    return pd.DataFrame(rows, columns=EVENT_COLUMNS)


def write_events_file(
    events: Sequence[MatchEvent], path: Path, provenance: Iterable[Tuple[str, object]] = ()
) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(format_directives(provenance))
        events_frame(events).to_csv(handle, index=False, lineterminator="\n")
    logger.info(f"Wrote {len(events)} events to {path}")


def read_events_file(path: Path) -> Tuple[List[MatchEvent], Dict[str, str]]:
    """Events (0-based) plus the provenance directives of the file."""
    path = Path(path)
    directives, skip = read_directives(path)
    frame = read_table(path, skip)
    header_line = skip + 1
    first_line = header_line + 1
    required = EVENT_COLUMNS[:4]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise IngestError([RowDiagnostic(str(path), header_line, "missing_column", f"missing columns {missing}")])

    problems = RowProblems(path)
    starts = numeric_column(frame, "start_index", first_line, problems)
    times = numeric_column(frame, "start_time_s", first_line, problems)
    lengths = numeric_column(frame, "length", first_line, problems)
    distances = {}
    for axis, column in DISTANCE_COLUMNS.items():
        if column.lower() in frame.columns:
            text = frame[column.lower()].astype(str).str.strip()
            distances[axis] = pd.to_numeric(text.where(text != "", "nan"), errors="coerce").to_numpy(np.float64)
    names = frame["behavior_class"].astype(str).str.strip().to_numpy()
    if problems:
        raise IngestError(problems.sorted(), rows_read=len(frame))

    events = []
    for i in range(len(frame)):
        line = first_line + i
        if starts[i] < 1 or lengths[i] < 1 or not names[i]:
            problems.add(line, "malformed_row", "start_index and length must be positive and class non-empty")
            continue
        events.append(
            MatchEvent(
                behavior_class=names[i],
                start_index=int(starts[i]) - 1,
                start_time_s=float(times[i]),
                length=int(lengths[i]),
                per_axis_distance={a: float(d[i]) for a, d in distances.items() if np.isfinite(d[i])},
            )
        )
    if problems:
        raise IngestError(problems.sorted(), rows_read=len(frame))
    logger.info(f"Read {len(events)} events from {path}")
    return events, directives
