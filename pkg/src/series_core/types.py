# src/series_core/types.py
"""Value types for multi-axis accelerometer series and weak labels.

Indices are 0-based everywhere inside the package; files and log messages
use 1-based indices.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_SAMPLE_RATE_HZ = 100.0
DEFAULT_EPSILON = 1e-8
MIN_QUERY_LENGTH = 4


class Axis(str, Enum):
    X = "X"
    Y = "Y"
    Z = "Z"

    @staticmethod
    def order(axis: "Axis") -> int:
        return _AXIS_ORDER[axis]

    @classmethod
    def parse(cls, text: str) -> "Axis":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"unknown axis '{text}' (expected X, Y or Z)") from None

    @classmethod
    def parse_list(cls, text: str) -> Tuple["Axis", ...]:
        axes = [cls.parse(part) for part in text.split(",") if part.strip()]
        return tuple(sorted(set(axes), key=cls.order))


_AXIS_ORDER = {Axis.X: 0, Axis.Y: 1, Axis.Z: 2}
ALL_AXES: Tuple[Axis, ...] = (Axis.X, Axis.Y, Axis.Z)


def _frozen_array(values: Iterable[float]) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A single axis of real-valued samples (g units) at a fixed rate."""

    values: np.ndarray
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self) -> None:
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("a time series needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("time series values must be finite")
        if not self.sample_rate_hz > 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.sample_rate_hz == other.sample_rate_hz and np.array_equal(
            self.values, other.values
        )

    def subsequence(self, start: int, m: int) -> np.ndarray:
        if start < 0 or m < 1 or start + m > len(self):
            raise IndexError(f"subsequence [{start}, {start + m}) outside series of length {len(self)}")
        return self.values[start : start + m]


@dataclass(frozen=True, eq=False)
class Subsequence:
    """A contiguous slice ``T[source_start : source_start + length]``."""

    source_start: int
    values: np.ndarray

    @classmethod
    def of(cls, series: TimeSeries, start: int, m: int) -> "Subsequence":
        return cls(start, series.subsequence(start, m))

    @property
    def length(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True, eq=False)
class MultiAxisSeries:
    """Aligned per-axis series sharing length and sample rate."""

    axes: Mapping[Axis, TimeSeries]
    sample_rate_hz: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.axes:
            raise ValueError("a multi-axis series needs at least one axis")
        ordered = {Axis(a): self.axes[a] for a in sorted(self.axes, key=lambda a: Axis.order(Axis(a)))}
        lengths = {len(ts) for ts in ordered.values()}
        rates = {ts.sample_rate_hz for ts in ordered.values()}
        if len(lengths) != 1:
            raise ValueError(f"axes differ in length: {sorted(lengths)}")
        if len(rates) != 1:
            raise ValueError(f"axes differ in sample rate: {sorted(rates)}")
        object.__setattr__(self, "axes", ordered)
        object.__setattr__(self, "sample_rate_hz", rates.pop())

    @classmethod
    def from_arrays(
        cls, arrays: Mapping[Axis, Sequence[float]], sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ
    ) -> "MultiAxisSeries":
        return cls({Axis(a): TimeSeries(np.asarray(v), sample_rate_hz) for a, v in arrays.items()})

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiAxisSeries):
            return NotImplemented
        return list(self.axes) == list(other.axes) and all(
            self.axes[a] == other.axes[a] for a in self.axes
        )

    @property
    def length(self) -> int:
        return len(next(iter(self.axes.values())))

    @property
    def duration_s(self) -> float:
        return self.length / self.sample_rate_hz

    @property
    def axis_ids(self) -> Tuple[Axis, ...]:
        return tuple(self.axes)

    def axis(self, axis: Axis) -> TimeSeries:
        try:
            return self.axes[axis]
        except KeyError:
            raise KeyError(f"axis {axis.value} not present (have {[a.value for a in self.axes]})") from None

    def slice(self, start: int, stop: Optional[int] = None) -> "MultiAxisSeries":
        stop = self.length if stop is None else stop
        return MultiAxisSeries(
            {a: TimeSeries(ts.values[start:stop], ts.sample_rate_hz) for a, ts in self.axes.items()}
        )

    def transformed(
        self, scale: Mapping[Axis, float], offset: Mapping[Axis, float]
    ) -> "MultiAxisSeries":
        """Per-axis affine copy ``scale * x + offset``."""
        return MultiAxisSeries(
            {
                a: TimeSeries(ts.values * scale.get(a, 1.0) + offset.get(a, 0.0), ts.sample_rate_hz)
                for a, ts in self.axes.items()
            }
        )

    def as_dict(self) -> Dict[Axis, np.ndarray]:
        return {a: ts.values for a, ts in self.axes.items()}


class LabelInterval(BaseModel):
    """A weakly labeled region: one or more instances of a behavior occur inside."""

    model_config = ConfigDict(frozen=True)

    start_index: int = Field(..., ge=0)
    end_index: int = Field(..., ge=0)  # inclusive
    behavior_class: str = Field(..., min_length=1)

    @model_validator(mode="after")
    def _ordered(self) -> "LabelInterval":
        if self.start_index > self.end_index:
            raise ValueError(
                f"interval start {self.start_index} is after end {self.end_index}"
            )
        return self

    @property
    def length(self) -> int:
        return self.end_index - self.start_index + 1

    def contains(self, index: int) -> bool:
        return self.start_index <= index <= self.end_index

    def overlaps(self, other: "LabelInterval") -> bool:
        return self.start_index <= other.end_index and other.start_index <= self.end_index


def intervals_of(labels: Iterable[LabelInterval], behavior_class: str) -> list:
    """Intervals of one class, sorted by start."""
    return sorted(
        (lab for lab in labels if lab.behavior_class == behavior_class),
        key=lambda lab: (lab.start_index, lab.end_index),
    )


def label_mask(n: int, labels: Iterable[LabelInterval], behavior_class: str) -> np.ndarray:
    """Boolean mask of length ``n``, True at indices inside ``behavior_class`` intervals."""
    mask = np.zeros(n, dtype=bool)
    for lab in labels:
        if lab.behavior_class == behavior_class and lab.start_index < n:
            mask[lab.start_index : min(lab.end_index, n - 1) + 1] = True
    return mask
