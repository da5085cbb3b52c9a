# src/dictionary_builder/models.py
import hashlib
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.series_core.types import Axis, MultiAxisSeries


class CandidateScore(BaseModel):
    """Outcome of one nearest-neighbor sweep for a candidate window."""

    model_config = ConfigDict(frozen=True)

    query_position: Optional[int] = None
    length: int = Field(..., ge=1)
    true_positives: int = Field(0, ge=0)
    false_positives: int = Field(0, ge=0)
    # distance of the worst accepted TP (0 when nothing was accepted)
    threshold_distance: float = 0.0
    # distance of the negative position that ended the sweep
    stop_distance: float = math.inf
    matched_positions: Tuple[int, ...] = ()

    @property
    def eligible(self) -> bool:
        return self.false_positives == 0 and self.true_positives >= 1

    def rank_key(self) -> tuple:
        """Total order used for selection: best candidate sorts first."""
        position = self.query_position if self.query_position is not None else -1
        return (-self.true_positives, -self.length, self.threshold_distance, position)


@dataclass(frozen=True, eq=False)
class AxisTemplate:
    values: np.ndarray
    threshold: float

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if not (math.isfinite(self.threshold) and self.threshold > 0):
            raise ValueError(f"threshold must be positive and finite, got {self.threshold}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AxisTemplate):
            return NotImplemented
        return self.threshold == other.threshold and np.array_equal(self.values, other.values)


@dataclass(frozen=True, eq=False)
class QueryTemplate:
    """A learned template: per-axis values and thresholds for one behavior class."""

    behavior_class: str
    axis_templates: Mapping[Axis, AxisTemplate]
    length_samples: int
    source_position: int
    anchor: Axis
    training_true_positives: int = 0

    def __post_init__(self) -> None:
        if not self.behavior_class:
            raise ValueError("behavior_class must be non-empty")
        if not self.axis_templates:
            raise ValueError(f"template '{self.behavior_class}' has no axes")
        ordered = {a: self.axis_templates[a] for a in sorted(self.axis_templates, key=Axis.order)}
        for axis, tmpl in ordered.items():
            if tmpl.values.size != self.length_samples:
                raise ValueError(
                    f"axis {axis.value} of '{self.behavior_class}' has {tmpl.values.size} values, "
                    f"expected {self.length_samples}"
                )
        if self.anchor not in ordered:
            raise ValueError(f"anchor {self.anchor.value} is not a template axis")
        object.__setattr__(self, "axis_templates", ordered)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QueryTemplate):
            return NotImplemented
        return (
            self.behavior_class == other.behavior_class
            and self.length_samples == other.length_samples
            and self.source_position == other.source_position
            and self.anchor == other.anchor
            and self.training_true_positives == other.training_true_positives
            and dict(self.axis_templates) == dict(other.axis_templates)
        )

    @property
    def axes(self) -> Tuple[Axis, ...]:
        return tuple(self.axis_templates)

    @property
    def exclusion_half_width(self) -> int:
        return int(math.ceil(self.length_samples / 2))


class TrainingIdentity(BaseModel):
    model_config = ConfigDict(frozen=True)

    length: int
    sample_rate_hz: float
    axes: List[Axis]
    sha256: str

    @classmethod
    def of(cls, series: MultiAxisSeries) -> "TrainingIdentity":
        digest = hashlib.sha256()
        for axis, ts in series.axes.items():
            digest.update(axis.value.encode())
            digest.update(np.ascontiguousarray(ts.values).tobytes())
        return cls(
            length=series.length,
            sample_rate_hz=series.sample_rate_hz,
            axes=list(series.axis_ids),
            sha256=digest.hexdigest(),
        )


class ClassSearchSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    axes: List[Axis]
    anchor: Axis
    min_length: int
    max_length: int
    length_step: int
    stride: int
    candidates_scored: int = 0
    flat_windows_skipped: int = 0


class BuildMetadata(BaseModel):
    model_config = ConfigDict(frozen=True)

    training: Optional[TrainingIdentity] = None
    classes: Dict[str, ClassSearchSummary] = Field(default_factory=dict)
    parameters: Dict[str, Any] = Field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class Dictionary:
    """Templates keyed by behavior class, at most one per class."""

    templates: Tuple[QueryTemplate, ...] = ()
    build_metadata: BuildMetadata = field(default_factory=BuildMetadata)
    errors: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        templates = tuple(self.templates)
        classes = [t.behavior_class for t in templates]
        if len(set(classes)) != len(classes):
            raise ValueError(f"duplicate behavior classes in dictionary: {classes}")
        object.__setattr__(self, "templates", templates)
        object.__setattr__(self, "errors", dict(self.errors))

    def __len__(self) -> int:
        return len(self.templates)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dictionary):
            return NotImplemented
        return (
            self.templates == other.templates
            and self.build_metadata == other.build_metadata
            and self.errors == other.errors
        )

    @property
    def classes(self) -> List[str]:
        return [t.behavior_class for t in self.templates]

    @property
    def max_length(self) -> int:
        return max((t.length_samples for t in self.templates), default=0)

    def template(self, behavior_class: str) -> QueryTemplate:
        for tmpl in self.templates:
            if tmpl.behavior_class == behavior_class:
                return tmpl
        raise KeyError(behavior_class)

    def merged(self, other: "Dictionary") -> "Dictionary":
        """Templates of ``other`` replace same-class templates of ``self``."""
        replaced = set(other.classes)
        templates = [t for t in self.templates if t.behavior_class not in replaced]
        classes = dict(self.build_metadata.classes)
        classes.update(other.build_metadata.classes)
        errors = {k: v for k, v in self.errors.items() if k not in replaced}
        errors.update(other.errors)
        metadata = BuildMetadata(
            training=other.build_metadata.training or self.build_metadata.training,
            classes=classes,
            parameters={**self.build_metadata.parameters, **other.build_metadata.parameters},
        )
        return Dictionary(tuple(templates) + other.templates, metadata, errors)
