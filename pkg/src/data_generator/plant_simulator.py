# src/data_generator/plant_simulator.py
"""Noise series with behavior waveforms planted inside padded weak labels.

Every plant gets a label interval that extends a random slack of between
half and all of ``padding_s`` on each side, so labels bracket behaviors
only loosely.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from src.data_generator.models import PlantSpec, SynthSpec
from src.series_core.errors import ScheduleError
from src.series_core.types import ALL_AXES, Axis, LabelInterval, MultiAxisSeries

logger = logging.getLogger(__name__)


def _bump(t: np.ndarray, center: float, width: float) -> np.ndarray:
    return np.exp(-(((t - center) / width) ** 2))


def valley_peak(t: np.ndarray) -> Dict[Axis, np.ndarray]:
    """Head dip: X valley with a small rebound, Z peak slightly later."""
    return {
        Axis.X: -_bump(t, 0.4, 0.12) + 0.4 * _bump(t, 0.75, 0.08),
        Axis.Z: _bump(t, 0.45, 0.12) - 0.3 * _bump(t, 0.8, 0.1),
    }


def transient_flat(t: np.ndarray) -> Dict[Axis, np.ndarray]:
    """Short Z oscillation followed by stillness."""
    active = t < 0.35
    burst = np.where(active, np.sin(2 * np.pi * 2 * t / 0.35) * np.sin(np.pi * t / 0.35) ** 2, 0.0)
    return {Axis.Z: burst}


def wing_shake(t: np.ndarray) -> Dict[Axis, np.ndarray]:
    envelope = np.sin(np.pi * t) ** 2
    return {
        Axis.X: envelope * np.sin(2 * np.pi * 6 * t),
        Axis.Z: envelope * np.cos(2 * np.pi * 6 * t),
    }


WAVEFORMS: Dict[str, Callable[[np.ndarray], Dict[Axis, np.ndarray]]] = {
    "valley_peak": valley_peak,
    "transient_flat": transient_flat,
    "wing_shake": wing_shake,
}


@dataclass(frozen=True)
class SyntheticDataset:
    series: MultiAxisSeries
    labels: List[LabelInterval]
    # exact plant extents, same layout as labels
    truth: List[LabelInterval]
    spec: SynthSpec
    seed: int

    @property
    def classes(self) -> List[str]:
        return self.spec.classes


class AccelerometerSimulator:
    """Simulates a three-axis accelerometer recording with planted behaviors"""

    def __init__(self, spec: SynthSpec, seed: int):
        self.spec = spec
        self.seed = seed
        self.rate = spec.sample_rate_hz
        self.n = int(round(spec.duration_s * self.rate))
        self.pad = int(round(spec.padding_s * self.rate))
        self.gap = int(round(spec.min_gap_s * self.rate))
        if self.n < 1:
            raise ScheduleError(f"duration {spec.duration_s} s yields no samples at {self.rate} Hz")

    def plant_length(self, plant: PlantSpec) -> int:
        length = int(round(plant.duration_s * self.rate))
        if length < 4:
            raise ScheduleError(f"plant '{plant.behavior_class}' is only {length} samples long")
        return length

    def generate(self) -> SyntheticDataset:
        rng = np.random.default_rng(self.seed)
        values = {
            axis: self.spec.axis_offsets.get(axis, 0.0) + rng.normal(0.0, self.spec.noise_std, self.n)
            if self.spec.noise_std > 0
            else np.full(self.n, self.spec.axis_offsets.get(axis, 0.0))
            for axis in ALL_AXES
        }
        placements = self._explicit_placements() + self._scheduled_placements(rng)
        placements.sort(key=lambda p: p[1])

        labels, truth = [], []
        for plant, start in placements:
            length = self.plant_length(plant)
            shape = WAVEFORMS[plant.waveform](np.arange(length) / length)
            scale = plant.amplitude * rng.uniform(0.9, 1.1)
            for axis, wave in shape.items():
                values[axis][start : start + length] += scale * wave
            left = int(rng.integers(self.pad // 2, self.pad + 1))
            right = int(rng.integers(self.pad // 2, self.pad + 1))
            truth.append(LabelInterval(start_index=start, end_index=start + length - 1, behavior_class=plant.behavior_class))
            labels.append(
                LabelInterval(
                    start_index=max(0, start - left),
                    end_index=min(self.n - 1, start + length - 1 + right),
                    behavior_class=plant.behavior_class,
                )
            )
        self._check_disjoint(labels)
        series = MultiAxisSeries.from_arrays(values, sample_rate_hz=self.rate)
        logger.info(f"Generated {self.n} samples with {len(truth)} plants (seed={self.seed})")
        return SyntheticDataset(series, labels, truth, self.spec, self.seed)

    def _explicit_placements(self) -> List[Tuple[PlantSpec, int]]:
        placements = []
        for plant in self.spec.plants:
            length = self.plant_length(plant)
            for position in plant.positions_s or []:
                start = int(round(position * self.rate))
                if start + length > self.n:
                    raise ScheduleError(
                        f"plant '{plant.behavior_class}' at {position} s runs past the end of the recording"
                    )
                placements.append((plant, start))
        return placements

    def _scheduled_placements(self, rng: np.random.Generator) -> List[Tuple[PlantSpec, int]]:
        """One plant per equal-width slot, slots shuffled across classes."""
        queue = [p for p in self.spec.plants if p.positions_s is None for _ in range(p.count)]
        if not queue:
            return []
        order = rng.permutation(len(queue))
        width = self.n // len(queue)
        placements = []
        for slot, k in enumerate(order):
            plant = queue[k]
            length = self.plant_length(plant)
            lo = slot * width
            hi = self.n if slot == len(queue) - 1 else lo + width
            first = lo + self.pad + self.gap // 2
            last = hi - length - self.pad - (self.gap - self.gap // 2)
            if last < first:
                raise ScheduleError(
                    f"{len(queue)} plants do not fit in {self.spec.duration_s} s with "
                    f"{self.spec.padding_s} s padding and {self.spec.min_gap_s} s gaps"
                )
            placements.append((plant, int(rng.integers(first, last + 1))))
        return placements

    @staticmethod
    def _check_disjoint(labels: List[LabelInterval]) -> None:
        ordered = sorted(labels, key=lambda lab: lab.start_index)
        for prev, cur in zip(ordered, ordered[1:]):
            if cur.start_index <= prev.end_index:
                raise ScheduleError(
                    f"padded intervals of '{prev.behavior_class}' and '{cur.behavior_class}' overlap "
                    f"near sample {cur.start_index + 1}"
                )


def synth_generate(spec: SynthSpec, seed: int) -> SyntheticDataset:
    return AccelerometerSimulator(spec, seed).generate()
