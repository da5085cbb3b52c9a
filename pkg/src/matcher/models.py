# src/matcher/models.py
from typing import Dict

from pydantic import BaseModel, ConfigDict, Field

from src.series_core.types import Axis


class MatchEvent(BaseModel):
    """A time-stamped detection of one template in a stream."""

    model_config = ConfigDict(frozen=True)

    behavior_class: str = Field(..., min_length=1)
    start_index: int = Field(..., ge=0)
    start_time_s: float = Field(..., ge=0)
    length: int = Field(..., ge=1)
    per_axis_distance: Dict[Axis, float] = Field(default_factory=dict)

    @property
    def end_index(self) -> int:
        return self.start_index + self.length - 1

    def sort_key(self) -> tuple:
        return (self.start_index, self.behavior_class)
