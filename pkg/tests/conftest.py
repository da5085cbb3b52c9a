"""Shared fixtures for behaviordict tests"""
import os

import numpy as np
import pytest

from src.config import BuildConfig, ClassBuildConfig
from src.data_generator.models import PlantSpec, SynthSpec
from src.series_core.types import Axis, LabelInterval, MultiAxisSeries


def pytest_collection_modifyitems(config, items):
    if os.environ.get("BEHAVIORDICT_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set BEHAVIORDICT_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def planted_series(rng, motif, starts, n, noise_std=0.05, axis=Axis.X):
    """Gaussian noise with ``motif`` added at each start; returns a one-axis series."""
    values = rng.normal(0.0, noise_std, n)
    for s in starts:
        values[s : s + motif.size] += motif
    return MultiAxisSeries.from_arrays({axis: values})


def padded_labels(starts, m, name, pad=20):
    return [LabelInterval(start_index=s - pad, end_index=s + m - 1 + pad, behavior_class=name) for s in starts]


@pytest.fixture
def motif():
    """A bump then a wider dip; shifted copies do not line up with it."""
    t = np.linspace(0.0, 1.0, 40)
    return 3.0 * (np.exp(-(((t - 0.3) / 0.1) ** 2)) - 0.6 * np.exp(-(((t - 0.7) / 0.15) ** 2)))


@pytest.fixture
def small_spec():
    """Two behaviors, five plants each, one minute at 100 Hz."""
    return SynthSpec(
        duration_s=60.0,
        noise_std=0.05,
        plants=[
            PlantSpec(behavior_class="feeding", waveform="valley_peak", duration_s=0.8, amplitude=1.0, count=5),
            PlantSpec(behavior_class="preening", waveform="transient_flat", duration_s=0.8, amplitude=1.2, count=5),
        ],
    )


def three_class_build_config():
    """Feeding, preening and dustbathing at 0.3-0.5 s, bounded sweeps.

    Windows stay well under the 0.8 s plants, so a window holding the
    distinctive part of a plant overlaps that plant by at least half.
    """
    common = dict(min_length_s=0.3, max_length_s=0.5, length_step_s=0.1, stride=4)
    return BuildConfig(
        classes=[
            ClassBuildConfig(behavior_class="feeding", axes=[Axis.X, Axis.Z], **common),
            ClassBuildConfig(behavior_class="preening", axes=[Axis.Z], **common),
            ClassBuildConfig(behavior_class="dustbathing", axes=[Axis.X, Axis.Z], **common),
        ],
        threshold_rule="midpoint",
        max_threshold=5.0,
    )


@pytest.fixture
def three_class_config():
    return three_class_build_config()
