"""Tests for sensor, label, dictionary and event files"""
import numpy as np
import pytest

from src.dictionary_builder.models import (
    AxisTemplate,
    BuildMetadata,
    ClassSearchSummary,
    Dictionary,
    QueryTemplate,
    TrainingIdentity,
)
from src.matcher.models import MatchEvent
from src.series_core.errors import DictionaryFormatError, DomainError, IngestError
from src.series_core.types import Axis, LabelInterval, MultiAxisSeries
from src.storage import (
    dump_dictionary,
    ingest,
    load_dictionary,
    load_recording,
    parse_dictionary,
    read_events_file,
    read_label_file,
    read_sensor_file,
    save_dictionary,
    split_dataset,
    write_events_file,
    write_label_file,
    write_recording,
    write_sensor_file,
)


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def _codes(error):
    return [(d.line, d.code) for d in error.diagnostics]


def test_sensor_round_trip_is_bit_exact(tmp_path, rng):
    """Test written sensor values read back bit for bit"""
    series = MultiAxisSeries.from_arrays(
        {Axis.X: rng.normal(size=500), Axis.Y: rng.normal(size=500) * 1e-7, Axis.Z: 1.0 + rng.normal(size=500)},
        sample_rate_hz=25.0,
    )
    path = tmp_path / "sensor.csv"
    write_sensor_file(series, path, [("generator", "test")])
    loaded, report = read_sensor_file(path)
    assert loaded == series
    assert loaded.sample_rate_hz == 25.0
    assert report.rows_read == report.rows_accepted == 500


def test_three_row_file(tmp_path):
    """Test a minimal file with a rate directive"""
    path = _write(
        tmp_path / "s.csv",
        "# sample_rate_hz: 50\nsample_index,x,y,z\n1,0.1,0.2,0.3\n2,0.4,0.5,0.6\n3,0.7,0.8,0.9\n",
    )
    series, report = read_sensor_file(path)
    assert series.length == 3
    assert series.sample_rate_hz == 50.0
    assert series.axis(Axis.Y).values.tolist() == [0.2, 0.5, 0.8]
    assert report.columns == ["sample_index", "x", "y", "z"]


def test_timestamp_index_and_single_axis(tmp_path):
    """Test timestamp columns and files with one axis"""
    path = _write(tmp_path / "s.csv", "# sample_rate_hz: 10\ntimestamp,z\n0.0,1.0\n0.1,1.1\n0.2,0.9\n")
    series, _ = read_sensor_file(path)
    assert series.axis_ids == (Axis.Z,)
    bad = _write(tmp_path / "b.csv", "# sample_rate_hz: 10\ntimestamp,z\n0.0,1.0\n0.1,1.1\n0.35,0.9\n")
    with pytest.raises(IngestError) as info:
        read_sensor_file(bad)
    assert _codes(info.value) == [(5, "irregular_spacing")]


def test_sensor_diagnostics_itemize_every_row(tmp_path):
    """Test one diagnostic per rejected row with 1-based line numbers"""
    path = _write(
        tmp_path / "s.csv",
        "sample_index,x,y,z\n"
        "1,0.1,0.2,0.3\n"
        "2,abc,0.2,0.3\n"
        "3,inf,0.2,0.3\n"
        "3,0.1,0.2,0.3\n"
        "5,0.1,0.2,0.3\n"
        "6,0.1,0.2,0.3\n",
    )
    with pytest.raises(IngestError) as info:
        read_sensor_file(path)
    assert _codes(info.value) == [
        (3, "malformed_row"),
        (4, "non_finite"),
        (5, "non_monotone_index"),
        (6, "irregular_spacing"),
    ]
    # every row is either accepted or itemized
    assert info.value.rows_read == 6
    assert info.value.rows_read - len(info.value.diagnostics) == 2


def test_sensor_field_count_and_header_problems(tmp_path):
    """Test extra fields, unknown columns and empty bodies"""
    extra = _write(tmp_path / "a.csv", "sample_index,x\n1,0.1\n2,0.2,9\n")
    with pytest.raises(IngestError) as info:
        read_sensor_file(extra)
    assert _codes(info.value) == [(3, "malformed_row")]

    unknown = _write(tmp_path / "b.csv", "sample_index,x,w\n1,0.1,0.2\n")
    with pytest.raises(IngestError) as info:
        read_sensor_file(unknown)
    assert _codes(info.value) == [(1, "missing_column")]

    empty = _write(tmp_path / "c.csv", "# sample_rate_hz: 100\nsample_index,x\n")
    with pytest.raises(IngestError) as info:
        read_sensor_file(empty)
    assert _codes(info.value) == [(2, "no_samples")]


def test_bad_directives(tmp_path):
    """Test malformed header lines and rates"""
    with pytest.raises(IngestError) as info:
        read_sensor_file(_write(tmp_path / "a.csv", "# nonsense\nsample_index,x\n1,0.1\n"))
    assert _codes(info.value) == [(1, "bad_directive")]
    with pytest.raises(IngestError) as info:
        read_sensor_file(_write(tmp_path / "b.csv", "# sample_rate_hz: -3\nsample_index,x\n1,0.1\n"))
    assert _codes(info.value) == [(1, "bad_directive")]


def test_label_round_trip(tmp_path):
    """Test labels convert to 0-based on read and back on write"""
    labels = [
        LabelInterval(start_index=100, end_index=349, behavior_class="feeding"),
        LabelInterval(start_index=0, end_index=49, behavior_class="preening"),
        LabelInterval(start_index=200, end_index=260, behavior_class="preening"),
    ]
    path = tmp_path / "labels.csv"
    write_label_file(labels, path, classes=["feeding", "preening"])
    assert path.read_text().splitlines()[:3] == [
        "# classes: feeding,preening",
        "start_index,end_index,behavior_class",
        "1,50,preening",
    ]
    loaded, report = read_label_file(path, series_length=350)
    assert loaded == sorted(labels, key=lambda lab: lab.start_index)
    assert report.rows_accepted == 3


def test_label_beyond_series_names_line(tmp_path):
    """Test a label past the end of the series is reported on its line"""
    path = _write(tmp_path / "l.csv", "start_index,end_index,behavior_class\n1,10,feeding\n90,120,feeding\n")
    with pytest.raises(IngestError) as info:
        read_label_file(path, series_length=100)
    assert _codes(info.value) == [(3, "label_out_of_range")]
    assert "120" in info.value.diagnostics[0].message
    assert str(info.value).startswith(f"{path}:3: label_out_of_range")


def test_label_diagnostics(tmp_path):
    """Test inverted, malformed, overlapping and undeclared labels"""
    path = _write(
        tmp_path / "l.csv",
        "# classes: feeding,preening\n"
        "start_index,end_index,behavior_class\n"
        "1,10,feeding\n"
        "5,20,feeding\n"
        "30,25,feeding\n"
        "x,40,feeding\n"
        "50,60,dustbathing\n"
        "5,12,preening\n",
    )
    with pytest.raises(IngestError) as info:
        read_label_file(path)
    assert _codes(info.value) == [
        (4, "label_overlap"),
        (5, "label_inverted"),
        (6, "malformed_row"),
        (7, "unknown_class"),
    ]
    assert "line 3" in info.value.diagnostics[0].message


def test_dictionary_round_trip_is_bit_exact(tmp_path, rng):
    """Test hex encoding preserves every template value and threshold"""
    series = MultiAxisSeries.from_arrays({Axis.X: rng.normal(size=200), Axis.Z: rng.normal(size=200)})
    template = QueryTemplate(
        behavior_class="feeding",
        axis_templates={
            Axis.Z: AxisTemplate(rng.normal(size=30), 0.1 + 0.2),
            Axis.X: AxisTemplate(rng.normal(size=30) * 1e-9, np.nextafter(2.5, np.inf)),
        },
        length_samples=30,
        source_position=17,
        anchor=Axis.X,
        training_true_positives=4,
    )
    metadata = BuildMetadata(
        training=TrainingIdentity.of(series),
        classes={
            "feeding": ClassSearchSummary(
                axes=[Axis.X, Axis.Z], anchor=Axis.X, min_length=20, max_length=30, length_step=5, stride=1
            )
        },
        parameters={"epsilon": 1e-8, "threshold_rule": "last_tp", "max_threshold": None},
    )
    dictionary = Dictionary((template,), metadata, {"preening": "no conserved template for class 'preening'"})
    path = tmp_path / "dict.json"
    save_dictionary(dictionary, path)
    loaded = load_dictionary(path)
    assert loaded == dictionary
    assert loaded.template("feeding").axes == (Axis.X, Axis.Z)
    assert dump_dictionary(loaded) == path.read_text()


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"format_version": 2}',
        '{"format_version": 1, "templates": [{"behavior_class": "a", "length_samples": 1, '
        '"source_position": 0, "anchor": "X", "axes": [{"axis": "X", "threshold": "zz", "values": ["0x1p+0"]}]}]}',
        '{"format_version": 1, "templates": [{"behavior_class": "a", "length_samples": 1, '
        '"source_position": 0, "anchor": "X", "axes": [{"axis": "X", "threshold": "-0x1p+0", "values": ["0x1p+0"]}]}]}',
    ],
)
def test_invalid_dictionary_documents(text):
    """Test malformed dictionaries raise a format error"""
    with pytest.raises(DictionaryFormatError):
        parse_dictionary(text)


def test_events_round_trip(tmp_path):
    """Test events keep their fields and provenance"""
    events = [
        MatchEvent(
            behavior_class="feeding",
            start_index=1200,
            start_time_s=12.0,
            length=80,
            per_axis_distance={Axis.X: 0.5, Axis.Z: 1.25},
        ),
        MatchEvent(behavior_class="preening", start_index=0, start_time_s=0.0, length=60, per_axis_distance={Axis.Z: 2.0}),
    ]
    path = tmp_path / "events.csv"
    write_events_file(events, path, [("command", "match"), ("duration_s", 60.0)])
    lines = path.read_text().splitlines()
    assert lines[2] == "behavior_class,start_index,start_time_s,length,distance_X,distance_Y,distance_Z"
    assert lines[3] == "feeding,1201,12.000000,80,0.500000000,,1.250000000"
    loaded, directives = read_events_file(path)
    assert loaded == events
    assert directives == {"command": "match", "duration_s": "60.0"}


def test_empty_events_file(tmp_path):
    """Test a header-only events file reads as no events"""
    path = tmp_path / "events.csv"
    write_events_file([], path, [("command", "match")])
    events, directives = read_events_file(path)
    assert events == []
    assert directives["command"] == "match"


def test_recording_ingest_and_combined_diagnostics(tmp_path, rng):
    """Test ingest of a recording and diagnostics gathered from both files"""
    series = MultiAxisSeries.from_arrays({Axis.X: rng.normal(size=100)})
    labels = [LabelInterval(start_index=10, end_index=30, behavior_class="feeding")]
    write_recording(series, labels, tmp_path / "s.csv", tmp_path / "l.csv", classes=["feeding"])
    got_series, got_labels = ingest(tmp_path / "s.csv", tmp_path / "l.csv")
    assert got_series == series and got_labels == labels

    _write(tmp_path / "bad_s.csv", "sample_index,x\n1,0.1\n2,zz\n")
    _write(tmp_path / "bad_l.csv", "start_index,end_index,behavior_class\n5,1,feeding\n")
    with pytest.raises(IngestError) as info:
        load_recording(tmp_path / "bad_s.csv", tmp_path / "bad_l.csv")
    assert [d.code for d in info.value.diagnostics] == ["malformed_row", "label_inverted"]


def test_split_dataset(rng):
    """Test the split re-bases test labels and drops straddling ones"""
    series = MultiAxisSeries.from_arrays({Axis.X: rng.normal(size=100)})
    labels = [
        LabelInterval(start_index=0, end_index=9, behavior_class="a"),
        LabelInterval(start_index=45, end_index=55, behavior_class="b"),
        LabelInterval(start_index=60, end_index=70, behavior_class="a"),
    ]
    (train, train_labels), (test, test_labels) = split_dataset(series, labels, 50)
    assert train.length == test.length == 50
    assert train_labels == labels[:1]
    assert test_labels == [LabelInterval(start_index=10, end_index=20, behavior_class="a")]
    assert np.array_equal(test.axis(Axis.X).values, series.axis(Axis.X).values[50:])
    for at in (0, 100):
        with pytest.raises(DomainError):
            split_dataset(series, labels, at)
