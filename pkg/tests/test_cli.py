"""Tests for the batch command line"""
import argparse
import re

import pytest

from src.cli.main import build_parser, format_error, main
from src.data_generator.models import SynthSpec
from src.matcher.models import MatchEvent
from src.series_core.types import MultiAxisSeries
from src.storage import (
    load_dictionary,
    read_events_file,
    read_label_file,
    read_sensor_file,
    write_events_file,
    write_sensor_file,
)

ERROR_LINE = re.compile(r'^error code=(\w+) message="(.*)"$')

BUILD_FLAGS = ["--min-len", "0.3", "--max-len", "0.5", "--len-step", "0.1", "--stride", "4",
               "--threshold-rule", "midpoint", "--max-threshold", "5.0"]


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    spec_path = out / "spec.json"
    spec_path.write_text(SynthSpec.three_behaviors(duration_s=90.0, plants_per_class=3).model_dump_json())
    assert main(["synth", "--spec", str(spec_path), "--seed", "5", "--out-dir", str(out)]) == 0
    return out


@pytest.fixture(scope="module")
def feeding_dict(synth_dir):
    path = synth_dir / "feeding.json"
    code = main(
        ["build-dict", "--sensor", str(synth_dir / "sensor.csv"), "--labels", str(synth_dir / "labels.csv"),
         "--class", "feeding", "--axes", "X,Z", "--out", str(path)] + BUILD_FLAGS
    )
    assert code == 0
    return path


def _error(capsys):
    line = capsys.readouterr().err.strip().splitlines()[-1]
    match = ERROR_LINE.match(line)
    assert match, line
    return match.group(1), match.group(2)


def test_format_error_escapes_quotes():
    """Test error lines stay on one line with quotes escaped"""
    assert format_error("io", 'no "file"\nhere') == 'error code=io message="no \\"file\\" here"'


def test_synth_writes_dataset(synth_dir):
    """Test synth produces readable sensor, label and truth files"""
    series, _ = read_sensor_file(synth_dir / "sensor.csv")
    labels, _ = read_label_file(synth_dir / "labels.csv", series_length=series.length)
    truth, _ = read_label_file(synth_dir / "truth.csv")
    assert series.length == 9000
    assert len(labels) == len(truth) == 9


def test_build_dict_single_class(feeding_dict):
    """Test build-dict writes a one-class dictionary"""
    dictionary = load_dictionary(feeding_dict)
    assert dictionary.classes == ["feeding"]
    assert dictionary.build_metadata.parameters["threshold_rule"] == "midpoint"


def test_build_dict_is_reproducible(synth_dir, feeding_dict):
    """Test a rerun writes a byte-identical dictionary"""
    again = synth_dir / "feeding_again.json"
    main(
        ["build-dict", "--sensor", str(synth_dir / "sensor.csv"), "--labels", str(synth_dir / "labels.csv"),
         "--class", "feeding", "--axes", "X,Z", "--out", str(again)] + BUILD_FLAGS
    )
    assert again.read_bytes() == feeding_dict.read_bytes()


def test_build_dict_append(synth_dir, feeding_dict):
    """Test --append merges a second class into an existing dictionary"""
    path = synth_dir / "merged.json"
    path.write_bytes(feeding_dict.read_bytes())
    code = main(
        ["build-dict", "--sensor", str(synth_dir / "sensor.csv"), "--labels", str(synth_dir / "labels.csv"),
         "--class", "preening", "--axes", "Z", "--append", "--out", str(path)] + BUILD_FLAGS
    )
    assert code == 0
    assert load_dictionary(path).classes == ["feeding", "preening"]


def test_build_dict_from_config(synth_dir, tmp_path, three_class_config):
    """Test --config builds every configured class"""
    config_path = tmp_path / "config.json"
    config_path.write_text(three_class_config.model_dump_json())
    out = tmp_path / "dict.json"
    code = main(
        ["build-dict", "--sensor", str(synth_dir / "sensor.csv"), "--labels", str(synth_dir / "labels.csv"),
         "--config", str(config_path), "--workers", "2", "--out", str(out)]
    )
    assert code == 0
    assert load_dictionary(out).classes == ["feeding", "preening", "dustbathing"]


def test_build_dict_errors(synth_dir, tmp_path, capsys):
    """Test missing flags, bad labels and conflicting options fail with one error line"""
    sensor = str(synth_dir / "sensor.csv")
    labels = str(synth_dir / "labels.csv")
    out = str(tmp_path / "d.json")

    assert main(["build-dict", "--sensor", sensor, "--labels", labels, "--out", out]) == 1
    assert _error(capsys)[0] == "domain"

    bad_labels = tmp_path / "bad.csv"
    bad_labels.write_text("start_index,end_index,behavior_class\n1,99999,feeding\n")
    code = main(["build-dict", "--sensor", sensor, "--labels", str(bad_labels), "--class", "feeding",
                 "--axes", "X", "--out", out] + BUILD_FLAGS)
    assert code == 1
    code_name, message = _error(capsys)
    assert code_name == "label_out_of_range"
    assert ":2:" in message

    code = main(["build-dict", "--sensor", sensor, "--labels", labels, "--class", "grooming",
                 "--axes", "X", "--out", out] + BUILD_FLAGS)
    assert code == 1
    assert _error(capsys)[0] == "domain"

    code = main(["build-dict", "--sensor", sensor, "--labels", labels, "--class", "feeding",
                 "--axes", "X", "--min-len", "2", "--max-len", "1", "--out", out])
    assert code == 1
    assert _error(capsys)[0] == "config"


def test_usage_errors_exit_2():
    """Test argparse usage errors"""
    with pytest.raises(SystemExit) as info:
        main(["match"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["build-dict", "--sensor", "s", "--labels", "l", "--axes", "Q", "--out", "o"])
    assert info.value.code == 2


def test_every_option_has_help():
    """Test each subcommand option documents itself in --help"""
    parser = build_parser()
    commands = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for name, subparser in commands.choices.items():
        for action in subparser._actions:
            if isinstance(action, argparse._HelpAction):
                continue
            assert action.help, f"{name} {action.option_strings}"


def test_match_evaluate_frequency(synth_dir, feeding_dict, tmp_path, capsys):
    """Test match output feeds evaluate and frequency"""
    events_path = tmp_path / "events.csv"
    assert main(["match", "--sensor", str(synth_dir / "sensor.csv"), "--dict", str(feeding_dict),
                 "--out", str(events_path)]) == 0
    events, header = read_events_file(events_path)
    assert header["command"] == "match"
    assert header["classes"] == "feeding"
    assert header["duration_s"] == "90.0"
    assert events and all(e.behavior_class == "feeding" for e in events)

    chunked = tmp_path / "chunked.csv"
    assert main(["match", "--sensor", str(synth_dir / "sensor.csv"), "--dict", str(feeding_dict),
                 "--chunk", "2000", "--out", str(chunked)]) == 0
    assert read_events_file(chunked)[0] == events
    capsys.readouterr()

    assert main(["evaluate", "--events", str(events_path), "--labels", str(synth_dir / "labels.csv"),
                 "--class", "feeding"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[:4] == [
        "# command: evaluate",
        f"# events: {events_path}",
        f"# labels: {synth_dir / 'labels.csv'}",
        "# classes: feeding",
    ]
    report = [line for line in lines if not line.startswith("#")]
    assert report[0].startswith("behavior_class,tp,fp,fn,tn,total_bags")
    assert report[1].startswith("feeding,") and len(report) == 2

    text_out = tmp_path / "report.txt"
    assert main(["evaluate", "--events", str(events_path), "--labels", str(synth_dir / "labels.csv"),
                 "--format", "text", "--out", str(text_out)]) == 0
    text = text_out.read_text()
    assert text.startswith("# command: evaluate\n")
    assert "Behavior: feeding" in text and "Behavior: dustbathing" in text

    freq_out = tmp_path / "freq.csv"
    assert main(["frequency", "--events", str(events_path), "--window-s", "30", "--origin", "06:00",
                 "--out", str(freq_out)]) == 0
    rows = [line for line in freq_out.read_text().splitlines() if not line.startswith("#")]
    assert rows[0] == "window_start_s,window_end_s,window_start_clock,feeding"
    assert len(rows) == 4
    assert rows[1].startswith("0.000000,30.000000,06:00:00,")
    assert sum(int(r.rsplit(",", 1)[1]) for r in rows[1:]) == len(events)


def test_match_rejects_other_sample_rate(synth_dir, feeding_dict, tmp_path, capsys):
    """Test a stream recorded at another rate than the training data is refused"""
    series, _ = read_sensor_file(synth_dir / "sensor.csv")
    slow = tmp_path / "sensor_50hz.csv"
    write_sensor_file(MultiAxisSeries.from_arrays(series.as_dict(), sample_rate_hz=50.0), slow)
    out = tmp_path / "e.csv"
    assert main(["match", "--sensor", str(slow), "--dict", str(feeding_dict), "--out", str(out)]) == 1
    code_name, message = _error(capsys)
    assert code_name == "sample_rate"
    assert "50 Hz" in message and "100 Hz" in message
    assert not out.exists()


def test_match_is_reproducible(synth_dir, feeding_dict, tmp_path):
    """Test reruns of match write identical bytes"""
    outs = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for out in outs:
        main(["match", "--sensor", str(synth_dir / "sensor.csv"), "--dict", str(feeding_dict), "--out", str(out)])
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_match_errors(synth_dir, feeding_dict, tmp_path, capsys):
    """Test missing files and bad dictionaries"""
    assert main(["match", "--sensor", str(synth_dir / "sensor.csv"), "--dict", str(tmp_path / "none.json"),
                 "--out", str(tmp_path / "e.csv")]) == 1
    assert _error(capsys)[0] == "io"

    broken = tmp_path / "broken.json"
    broken.write_text('{"format_version": 9}')
    assert main(["match", "--sensor", str(synth_dir / "sensor.csv"), "--dict", str(broken),
                 "--out", str(tmp_path / "e.csv")]) == 1
    assert _error(capsys)[0] == "dictionary_format"

    assert main(["match", "--sensor", str(synth_dir / "sensor.csv"), "--dict", str(feeding_dict),
                 "--overlap", "10", "--out", str(tmp_path / "e.csv")]) == 1
    assert _error(capsys)[0] == "domain"


def test_frequency_over_empty_events(tmp_path, capsys):
    """Test an events file without matches gives zero counts"""
    events_path = tmp_path / "events.csv"
    write_events_file([], events_path, [("command", "match"), ("classes", "feeding,preening"), ("duration_s", 7200.0)])
    assert main(["frequency", "--events", str(events_path)]) == 0
    rows = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert rows == [
        "window_start_s,window_end_s,feeding,preening",
        "0.000000,3600.000000,0,0",
        "3600.000000,7200.000000,0,0",
    ]


def test_frequency_needs_span(tmp_path, capsys):
    """Test files without a duration need --span-s"""
    events_path = tmp_path / "events.csv"
    write_events_file(
        [MatchEvent(behavior_class="a", start_index=0, start_time_s=0.0, length=10)], events_path, [("command", "x")]
    )
    assert main(["frequency", "--events", str(events_path)]) == 1
    assert _error(capsys)[0] == "domain"
    assert main(["frequency", "--events", str(events_path), "--span-s", "0,100", "--window-s", "50"]) == 0
    rows = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert rows[1:] == ["0.000000,50.000000,1", "50.000000,100.000000,0"]


def test_split(synth_dir, tmp_path):
    """Test split writes train and test recordings"""
    out = tmp_path / "split"
    assert main(["split", "--sensor", str(synth_dir / "sensor.csv"), "--labels", str(synth_dir / "labels.csv"),
                 "--at-s", "45", "--out-dir", str(out)]) == 0
    train, _ = read_sensor_file(out / "train_sensor.csv")
    test, _ = read_sensor_file(out / "test_sensor.csv")
    assert train.length == test.length == 4500
    train_labels, _ = read_label_file(out / "train_labels.csv", series_length=train.length)
    test_labels, _ = read_label_file(out / "test_labels.csv", series_length=test.length)
    assert len(train_labels) + len(test_labels) <= 9
