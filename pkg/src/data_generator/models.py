# src/data_generator/models.py
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.config import DEFAULT_SAMPLE_RATE_HZ
from src.series_core.types import Axis

Waveform = Literal["valley_peak", "transient_flat", "wing_shake"]


class PlantSpec(BaseModel):
    """One behavior planted ``count`` times (or at explicit ``positions_s``)."""

    model_config = ConfigDict(frozen=True)

    behavior_class: str = Field(..., min_length=1)
    waveform: Waveform
    duration_s: float = Field(..., gt=0)
    amplitude: float = Field(1.0, gt=0)
    count: int = Field(0, ge=0)
    positions_s: Optional[List[float]] = None

    @model_validator(mode="after")
    def _count_matches_positions(self) -> "PlantSpec":
        if self.positions_s is not None:
            if self.count not in (0, len(self.positions_s)):
                raise ValueError(
                    f"count={self.count} disagrees with {len(self.positions_s)} explicit positions"
                )
            if any(p < 0 for p in self.positions_s):
                raise ValueError("plant positions must be non-negative")
        return self

    @property
    def occurrences(self) -> int:
        return len(self.positions_s) if self.positions_s is not None else self.count


class SynthSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    duration_s: float = Field(..., gt=0)
    sample_rate_hz: float = Field(DEFAULT_SAMPLE_RATE_HZ, gt=0)
    noise_std: float = Field(0.05, ge=0)
    # gravity-like constant per axis
    axis_offsets: Dict[Axis, float] = Field(default_factory=lambda: {Axis.X: 0.0, Axis.Y: 0.0, Axis.Z: 1.0})
    plants: List[PlantSpec] = Field(default_factory=list)
    padding_s: float = Field(1.0, ge=0)
    min_gap_s: float = Field(0.5, ge=0)

    @property
    def classes(self) -> List[str]:
        return list(dict.fromkeys(p.behavior_class for p in self.plants))

    @classmethod
    def three_behaviors(
        cls, duration_s: float, plants_per_class: int, noise_std: float = 0.05, **overrides
    ) -> "SynthSpec":
        """Feeding, preening and dustbathing plants of 0.8 s each."""
        plants = [
            PlantSpec(behavior_class="feeding", waveform="valley_peak", duration_s=0.8, amplitude=1.0, count=plants_per_class),
            PlantSpec(behavior_class="preening", waveform="transient_flat", duration_s=0.8, amplitude=1.2, count=plants_per_class),
            PlantSpec(behavior_class="dustbathing", waveform="wing_shake", duration_s=0.8, amplitude=0.8, count=plants_per_class),
        ]
        return cls(duration_s=duration_s, noise_std=noise_std, plants=plants, **overrides)
