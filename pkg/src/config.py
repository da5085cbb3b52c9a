# src/config.py
"""Constants and pydantic configuration models for dictionary building."""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.series_core.types import (  # noqa: F401  re-exported defaults
    DEFAULT_EPSILON,
    DEFAULT_SAMPLE_RATE_HZ,
    MIN_QUERY_LENGTH,
    Axis,
)

DEFAULT_WINDOW_S = 3600.0


class ClassBuildConfig(BaseModel):
    """How to search for one behavior's template."""

    model_config = ConfigDict(frozen=True)

    behavior_class: str = Field(..., min_length=1)
    axes: List[Axis] = Field(..., min_length=1)
    anchor: Optional[Axis] = None
    min_length_s: float = Field(..., gt=0)
    max_length_s: float = Field(..., gt=0)
    # None means every length (one-sample step)
    length_step_s: Optional[float] = Field(None, gt=0)
    stride: int = Field(1, ge=1)

    @field_validator("axes")
    @classmethod
    def _unique_axes(cls, axes: List[Axis]) -> List[Axis]:
        if len(set(axes)) != len(axes):
            raise ValueError(f"duplicate axes in {[a.value for a in axes]}")
        return sorted(axes, key=Axis.order)

    @model_validator(mode="after")
    def _check(self) -> "ClassBuildConfig":
        if self.min_length_s > self.max_length_s:
            raise ValueError("min_length_s must not exceed max_length_s")
        if self.anchor is not None and self.anchor not in self.axes:
            raise ValueError(f"anchor {self.anchor.value} is not one of the class axes")
        return self

    @property
    def anchor_axis(self) -> Axis:
        return self.anchor if self.anchor is not None else self.axes[0]

    def length_range(self, sample_rate_hz: float) -> range:
        """Window lengths in samples, inclusive of the rounded maximum."""
        min_m = int(round(self.min_length_s * sample_rate_hz))
        max_m = int(round(self.max_length_s * sample_rate_hz))
        step = 1
        if self.length_step_s is not None:
            step = max(1, int(round(self.length_step_s * sample_rate_hz)))
        return range(min_m, max_m + 1, step)


class BuildConfig(BaseModel):
    """Dictionary build parameters shared by every class."""

    model_config = ConfigDict(frozen=True)

    classes: List[ClassBuildConfig] = Field(..., min_length=1)
    epsilon: float = Field(DEFAULT_EPSILON, gt=0)
    workers: int = Field(1, ge=1)
    allow_partial: bool = False
    threshold_rule: Literal["last_tp", "midpoint"] = "last_tp"
    membership: Literal["start", "overlap"] = "start"
    max_threshold: Optional[float] = Field(None, ge=0)

    @field_validator("classes")
    @classmethod
    def _unique_classes(cls, classes: List[ClassBuildConfig]) -> List[ClassBuildConfig]:
        names = [c.behavior_class for c in classes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate behavior classes in {names}")
        return classes

    def for_class(self, behavior_class: str) -> ClassBuildConfig:
        for entry in self.classes:
            if entry.behavior_class == behavior_class:
                return entry
        raise KeyError(behavior_class)

    def describe(self) -> Dict[str, object]:
        """Flat parameter dict echoed into dictionary metadata."""
        return {
            "epsilon": self.epsilon,
            "threshold_rule": self.threshold_rule,
            "membership": self.membership,
            "max_threshold": self.max_threshold,
        }
