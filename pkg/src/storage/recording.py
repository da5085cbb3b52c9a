# src/storage/recording.py
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from src.series_core.errors import DomainError, IngestError
from src.series_core.types import LabelInterval, MultiAxisSeries
from src.storage.label_file import read_label_file, write_label_file
from src.storage.sensor_file import IngestReport, read_sensor_file, write_sensor_file

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Recording:
    """A sensor series with its weak labels and per-file row accounting."""

    series: MultiAxisSeries
    labels: List[LabelInterval]
    sensor_report: IngestReport
    label_report: IngestReport


def load_recording(sensor_path: Path, label_path: Path, classes: Optional[Sequence[str]] = None) -> Recording:
    """Read both files; diagnostics from either are raised together."""
    diagnostics = []
    series = sensor_report = None
    try:
        series, sensor_report = read_sensor_file(sensor_path)
    except IngestError as e:
        diagnostics.extend(e.diagnostics)
    try:
        labels, label_report = read_label_file(
            label_path, series_length=series.length if series is not None else None, classes=classes
        )
    except IngestError as e:
        diagnostics.extend(e.diagnostics)
    if diagnostics:
        raise IngestError(diagnostics)
    return Recording(series, labels, sensor_report, label_report)


def ingest(
    sensor_path: Path, label_path: Path, classes: Optional[Sequence[str]] = None
) -> Tuple[MultiAxisSeries, List[LabelInterval]]:
    recording = load_recording(sensor_path, label_path, classes)
    return recording.series, recording.labels


def split_dataset(
    series: MultiAxisSeries, labels: Sequence[LabelInterval], at_index: int
) -> Tuple[Tuple[MultiAxisSeries, List[LabelInterval]], Tuple[MultiAxisSeries, List[LabelInterval]]]:
    """Cut a recording at ``at_index`` into disjoint training and test parts.

    Test labels are re-based to the cut; labels straddling it are dropped.
    """
    if not 0 < at_index < series.length:
        raise DomainError(f"split index {at_index + 1} must fall strictly inside 1..{series.length}")
    train_labels, test_labels, dropped = [], [], []
    for lab in labels:
        if lab.end_index < at_index:
            train_labels.append(lab)
        elif lab.start_index >= at_index:
            test_labels.append(
                LabelInterval(
                    start_index=lab.start_index - at_index,
                    end_index=lab.end_index - at_index,
                    behavior_class=lab.behavior_class,
                )
            )
        else:
            dropped.append(lab)
    for lab in dropped:
        logger.warning(
            f"Dropping '{lab.behavior_class}' label [{lab.start_index + 1}, {lab.end_index + 1}] "
            f"straddling the split at {at_index + 1}"
        )
    return (series.slice(0, at_index), train_labels), (series.slice(at_index), test_labels)


def write_recording(
    series: MultiAxisSeries,
    labels: Sequence[LabelInterval],
    sensor_path: Path,
    label_path: Path,
    classes: Optional[Sequence[str]] = None,
    provenance: Sequence[Tuple[str, object]] = (),
) -> None:
    write_sensor_file(series, sensor_path, provenance)
    write_label_file(labels, label_path, classes)
