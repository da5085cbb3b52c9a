"""Tests for the synthetic accelerometer generator"""
import numpy as np
import pytest

from src.data_generator import PlantSpec, SynthSpec, generate_dataset, synth_generate
from src.data_generator.plant_simulator import WAVEFORMS
from src.series_core.errors import ScheduleError
from src.series_core.types import ALL_AXES, Axis
from src.storage import ingest, read_label_file


def test_same_seed_same_dataset(small_spec):
    """Test generation is deterministic for a seed"""
    a = synth_generate(small_spec, seed=7)
    b = synth_generate(small_spec, seed=7)
    c = synth_generate(small_spec, seed=8)
    assert a.series == b.series
    assert a.labels == b.labels
    assert not a.series == c.series


def test_zero_plants_gives_noise_only():
    """Test an empty plant list yields gravity plus noise and no labels"""
    dataset = synth_generate(SynthSpec(duration_s=10.0), seed=1)
    assert dataset.labels == [] and dataset.truth == []
    assert dataset.series.length == 1000
    assert dataset.series.axis_ids == ALL_AXES
    assert abs(dataset.series.axis(Axis.Z).values.mean() - 1.0) < 0.02


def test_plants_lie_inside_their_labels():
    """Test every truth extent is bracketed by its padded label"""
    spec = SynthSpec.three_behaviors(duration_s=120.0, plants_per_class=5)
    dataset = synth_generate(spec, seed=3)
    assert len(dataset.labels) == len(dataset.truth) == 15
    assert dataset.classes == ["feeding", "preening", "dustbathing"]
    for label, truth in zip(dataset.labels, dataset.truth):
        assert label.behavior_class == truth.behavior_class
        assert label.start_index < truth.start_index
        assert truth.end_index < label.end_index
        assert truth.length == 80
    starts = [lab.start_index for lab in dataset.labels]
    assert starts == sorted(starts)
    for prev, cur in zip(dataset.labels, dataset.labels[1:]):
        assert not prev.overlaps(cur)


def test_explicit_positions():
    """Test plants at fixed times land exactly there"""
    spec = SynthSpec(
        duration_s=20.0,
        noise_std=0.0,
        plants=[PlantSpec(behavior_class="feeding", waveform="valley_peak", duration_s=0.5, positions_s=[2.0, 10.0])],
    )
    dataset = synth_generate(spec, seed=0)
    assert [t.start_index for t in dataset.truth] == [200, 1000]
    x = dataset.series.axis(Axis.X).values
    assert np.all(x[:200] == 0.0)
    assert np.any(x[200:250] != 0.0)


@pytest.mark.parametrize(
    "spec",
    [
        SynthSpec.three_behaviors(duration_s=60.0, plants_per_class=100),
        SynthSpec(
            duration_s=10.0,
            plants=[PlantSpec(behavior_class="a", waveform="wing_shake", duration_s=0.8, positions_s=[1.0, 1.5])],
        ),
        SynthSpec(
            duration_s=10.0,
            plants=[PlantSpec(behavior_class="a", waveform="wing_shake", duration_s=0.8, positions_s=[9.5])],
        ),
    ],
)
def test_infeasible_schedules(spec):
    """Test crowded, overlapping or out-of-range plants are rejected"""
    with pytest.raises(ScheduleError):
        synth_generate(spec, seed=0)


def test_plant_spec_validation():
    """Test count must agree with explicit positions"""
    with pytest.raises(ValueError):
        PlantSpec(behavior_class="a", waveform="valley_peak", duration_s=1.0, count=3, positions_s=[1.0])


def test_waveforms_are_not_flat():
    """Test every waveform has variance on each of its axes"""
    t = np.arange(80) / 80
    for name, waveform in WAVEFORMS.items():
        for axis, wave in waveform(t).items():
            assert wave.shape == t.shape
            assert wave.std() > 0.05, (name, axis)


def test_written_dataset_ingests(tmp_path):
    """Test generated files read back to the same recording"""
    spec = SynthSpec.three_behaviors(duration_s=60.0, plants_per_class=3)
    paths = generate_dataset(spec, seed=11, out_dir=tmp_path / "synth")
    series, labels = ingest(paths["sensor"], paths["labels"])
    dataset = synth_generate(spec, seed=11)
    assert series == dataset.series
    assert labels == dataset.labels
    truth, _ = read_label_file(paths["truth"], series_length=series.length)
    assert truth == dataset.truth
    assert paths["sensor"].read_text().startswith("# sample_rate_hz: 100.0\n# generator: synth\n# seed: 11\n")
