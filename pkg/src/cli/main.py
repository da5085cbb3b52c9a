# src/cli/main.py
"""Batch command line: synth, split, build-dict, match, evaluate, frequency.

Run as ``python -m src.cli <command> ...``. Failures print one line

    error code=<code> message="<text>"

to stderr and exit with status 1; usage errors exit with status 2.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from src.config import DEFAULT_EPSILON, DEFAULT_WINDOW_S, BuildConfig, ClassBuildConfig
from src.data_generator.main import write_dataset
from src.data_generator.models import SynthSpec
from src.data_generator.plant_simulator import synth_generate
from src.dictionary_builder.builder import DictionaryBuilder
from src.evaluation.frequency import frequency_profile, parse_clock
from src.evaluation.mil import build_bags, evaluate_classes
from src.evaluation.report import render_report_csv, render_report_text
from src.matcher.detector import TemplateMatcher
from src.series_core.errors import DomainError, IngestError
from src.series_core.types import Axis
from src.storage.dictionary_file import load_dictionary, save_dictionary
from src.storage.directives import format_directives
from src.storage.events_file import read_events_file, write_events_file
from src.storage.label_file import parse_class_list, read_label_file, write_label_file
from src.storage.recording import load_recording, split_dataset
from src.storage.sensor_file import read_sensor_file, write_sensor_file
from src.utils.log_setup import configure_logging

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def _write_text(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _parse_span(text: str) -> Tuple[float, float]:
    try:
        t0, t1 = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected T0,T1 in seconds, got '{text}'")
    return t0, t1


def _axes(text: str) -> Tuple[Axis, ...]:
    try:
        return Axis.parse_list(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _axis(text: str) -> Axis:
    try:
        return Axis.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


# build-dict


def _build_config(args: argparse.Namespace) -> BuildConfig:
    overrides = {
        key: value
        for key, value in {
            "workers": args.workers,
            "threshold_rule": args.threshold_rule,
            "membership": args.membership,
            "max_threshold": args.max_threshold,
            "epsilon": args.epsilon,
        }.items()
        if value is not None
    }
    if args.allow_partial:
        overrides["allow_partial"] = True
    if args.config is not None:
        if args.behavior_class is not None:
            raise DomainError("--config and --class are mutually exclusive")
        base = BuildConfig.model_validate_json(Path(args.config).read_text(encoding="utf-8"))
        return BuildConfig.model_validate({**base.model_dump(), **overrides})
    required = [
        ("--class", args.behavior_class),
        ("--axes", args.axes),
        ("--min-len", args.min_len),
        ("--max-len", args.max_len),
    ]
    missing = [flag for flag, value in required if value is None]
    if missing:
        raise DomainError(f"missing {', '.join(missing)} (or pass --config)")
    class_config = ClassBuildConfig(
        behavior_class=args.behavior_class,
        axes=list(args.axes),
        anchor=args.anchor,
        min_length_s=args.min_len,
        max_length_s=args.max_len,
        length_step_s=args.len_step,
        stride=args.stride,
    )
    return BuildConfig(classes=[class_config], **overrides)


def cmd_build_dict(args: argparse.Namespace) -> int:
    config = _build_config(args)
    recording = load_recording(args.sensor, args.labels)
    dictionary = DictionaryBuilder(config).build(recording.series, recording.labels)
    if args.append and Path(args.out).exists():
        dictionary = load_dictionary(args.out).merged(dictionary)
    save_dictionary(dictionary, args.out)
    print(f"dictionary {args.out}: classes {','.join(dictionary.classes) or '-'}")
    for name, message in dictionary.errors.items():
        print(f"  skipped {name}: {message}")
    return 0


# match


def cmd_match(args: argparse.Namespace) -> int:
    dictionary = load_dictionary(args.dict)
    series, _ = read_sensor_file(args.sensor)
    epsilon = args.epsilon if args.epsilon is not None else dictionary.build_metadata.parameters.get("epsilon", DEFAULT_EPSILON)
    matcher = TemplateMatcher(dictionary, epsilon=epsilon, workers=args.workers)
    provenance: List[Tuple[str, object]] = [
        ("command", "match"),
        ("sensor", args.sensor),
        ("dictionary", args.dict),
        ("classes", ",".join(dictionary.classes)),
        ("sample_rate_hz", repr(float(series.sample_rate_hz))),
        ("duration_s", repr(series.duration_s)),
    ]
    if args.chunk is not None:
        overlap = args.overlap
        if overlap is None:
            overlap = max((t.length_samples + t.exclusion_half_width for t in dictionary.templates), default=0)
        events = matcher.match_windowed(series, args.chunk, overlap)
        provenance += [("chunk", args.chunk), ("overlap", overlap)]
    else:
        if args.overlap is not None:
            raise DomainError("--overlap requires --chunk")
        events = matcher.match_stream(series)
    write_events_file(events, args.out, provenance)
    print(f"events {args.out}: {len(events)} matches")
    return 0


# evaluate


def cmd_evaluate(args: argparse.Namespace) -> int:
    events, _ = read_events_file(args.events)
    labels, _ = read_label_file(args.labels)
    bags = build_bags(labels)
    classes = args.classes or None
    report = evaluate_classes(events, bags, classes)
    header_lines = format_directives(
        [
            ("command", "evaluate"),
            ("events", args.events),
            ("labels", args.labels),
            ("classes", ",".join(entry.score.matrix.target_class for entry in report.classes)),
        ]
    )
    render = render_report_text if args.format == "text" else render_report_csv
    _write_text(header_lines + render(report), args.out)
    return 0


# frequency


def cmd_frequency(args: argparse.Namespace) -> int:
    events, header = read_events_file(args.events)
    if args.span_s is not None:
        span = args.span_s
    elif "duration_s" in header:
        span = (0.0, float(header["duration_s"]))
    else:
        raise DomainError(f"{args.events} records no duration_s; pass --span-s T0,T1")
    if args.classes is not None:
        classes = parse_class_list(args.classes)
    else:
        classes = parse_class_list(header.get("classes", ""))
    profile = frequency_profile(events, span, args.window_s, args.stride_s, classes)
    origin = parse_clock(args.origin) if args.origin is not None else None
    frame = profile.to_frame(origin)
    header_lines = format_directives(
        [
            ("command", "frequency"),
            ("events", args.events),
            ("window_s", repr(profile.window_length_s)),
            ("stride_s", repr(profile.stride_s)),
        ]
    )
    body = frame.to_csv(index=False, float_format="%.6f", lineterminator="\n")
    _write_text(header_lines + body, args.out)
    return 0


# synth / split


def cmd_synth(args: argparse.Namespace) -> int:
    if args.spec is not None:
        spec = SynthSpec.model_validate_json(Path(args.spec).read_text(encoding="utf-8"))
    else:
        spec = SynthSpec.three_behaviors(args.duration_s, args.plants_per_class, noise_std=args.noise_std)
    dataset = synth_generate(spec, args.seed)
    paths = write_dataset(dataset, args.out_dir)
    print(f"synthetic dataset in {args.out_dir}: {dataset.series.length} samples, {len(dataset.truth)} plants")
    logger.info(f"Files: {', '.join(str(p) for p in paths.values())}")
    return 0


def cmd_split(args: argparse.Namespace) -> int:
    recording = load_recording(args.sensor, args.labels)
    series = recording.series
    if args.at_index is not None:
        at = args.at_index - 1
    else:
        at = int(round(args.at_s * series.sample_rate_hz))
    (train, train_labels), (test, test_labels) = split_dataset(series, recording.labels, at)
    classes = list(dict.fromkeys(lab.behavior_class for lab in recording.labels))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for part, part_series, part_labels in (("train", train, train_labels), ("test", test, test_labels)):
        provenance = [("command", "split"), ("source", args.sensor), ("part", part), ("split_index", at + 1)]
        write_sensor_file(part_series, out_dir / f"{part}_sensor.csv", provenance)
        write_label_file(part_labels, out_dir / f"{part}_labels.csv", classes)
    print(f"split at sample {at + 1}: train {train.length} samples / {len(train_labels)} labels, "
          f"test {test.length} samples / {len(test_labels)} labels")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING", type=str.upper, choices=LOG_LEVELS, help="log verbosity on stderr (default WARNING)")

    parser = argparse.ArgumentParser(prog="behaviordict", description="Weakly supervised behavior template dictionaries for accelerometer streams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dict", parents=[common], help="learn one template per behavior class")
    p.add_argument("--sensor", required=True, help="training sensor file")
    p.add_argument("--labels", required=True, help="weak-label file for the training sensor file")
    p.add_argument("--config", help="JSON BuildConfig with one entry per class (replaces the single-class flags)")
    p.add_argument("--class", dest="behavior_class", help="behavior class to learn")
    p.add_argument("--axes", type=_axes, help="comma-separated axes, e.g. X,Z")
    p.add_argument("--anchor", type=_axis, help="axis on which the template position is chosen (default: first axis)")
    p.add_argument("--min-len", type=float, help="shortest template length in seconds")
    p.add_argument("--max-len", type=float, help="longest template length in seconds")
    p.add_argument("--len-step", type=float, help="length step in seconds (default: one sample)")
    p.add_argument("--stride", type=int, default=1, help="start-position step inside labeled intervals (default 1)")
    p.add_argument("--workers", type=int, help="worker threads for candidate scoring")
    p.add_argument("--allow-partial", action="store_true", help="record failing classes instead of aborting")
    p.add_argument("--threshold-rule", choices=["last_tp", "midpoint"], help="how the stored threshold is derived (default last_tp)")
    p.add_argument("--membership", choices=["start", "overlap"], help="what makes a position a target-class hit (default start)")
    p.add_argument("--max-threshold", type=float, help="stop each sweep at this distance")
    p.add_argument("--epsilon", type=float, help="flatness threshold on window standard deviation (default 1e-8)")
    p.add_argument("--append", action="store_true", help="merge into an existing dictionary at --out, replacing same-class templates")
    p.add_argument("--out", required=True, help="dictionary JSON to write")
    p.set_defaults(handler=cmd_build_dict)

    p = sub.add_parser("match", parents=[common], help="find dictionary templates in a sensor stream")
    p.add_argument("--sensor", required=True, help="sensor file to scan")
    p.add_argument("--dict", required=True, help="dictionary JSON")
    p.add_argument("--out", required=True, help="events file to write")
    p.add_argument("--chunk", type=int, help="profile the stream in segments of this many samples")
    p.add_argument("--overlap", type=int, help="samples shared by consecutive segments (default: longest template plus its exclusion half-width)")
    p.add_argument("--workers", type=int, default=1, help="worker threads, one template per task (default 1)")
    p.add_argument("--epsilon", type=float, help="flatness threshold (default: the dictionary's)")
    p.set_defaults(handler=cmd_match)

    p = sub.add_parser("evaluate", parents=[common], help="bag-level confusion matrices against weak labels")
    p.add_argument("--events", required=True, help="events file written by match")
    p.add_argument("--labels", required=True, help="weak-label file for the matched sensor file")
    p.add_argument("--class", dest="classes", action="append", help="class to score; repeatable (default: every labeled class)")
    p.add_argument("--format", choices=["csv", "text"], default="csv", help="report layout (default csv)")
    p.add_argument("--out", type=Path, help="report file (default: stdout)")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("frequency", parents=[common], help="per-class event counts over sliding windows")
    p.add_argument("--events", required=True, help="events file written by match")
    p.add_argument("--window-s", type=float, default=DEFAULT_WINDOW_S, help=f"window length in seconds (default {DEFAULT_WINDOW_S:g})")
    p.add_argument("--stride-s", type=float, help="window step (default: the window length)")
    p.add_argument("--span-s", type=_parse_span, help="T0,T1 in seconds (default: 0 to the stream duration in the events file)")
    p.add_argument("--classes", help="comma-separated classes to report, zero columns included")
    p.add_argument("--origin", help="wall-clock time of the stream start, HH:MM[:SS]")
    p.add_argument("--out", type=Path, help="profile CSV (default: stdout)")
    p.set_defaults(handler=cmd_frequency)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset with planted behaviors")
    p.add_argument("--spec", help="JSON SynthSpec (default: three-behavior preset)")
    p.add_argument("--seed", type=int, required=True, help="random seed; the same seed writes the same files")
    p.add_argument("--out-dir", required=True, help="directory for sensor.csv, labels.csv and truth.csv")
    p.add_argument("--duration-s", type=float, default=600.0, help="preset duration")
    p.add_argument("--plants-per-class", type=int, default=10, help="preset plants per class")
    p.add_argument("--noise-std", type=float, default=0.05, help="preset noise standard deviation (g)")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("split", parents=[common], help="cut a recording into training and test parts")
    p.add_argument("--sensor", required=True, help="sensor file to split")
    p.add_argument("--labels", required=True, help="weak-label file for the sensor file")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--at-index", type=int, help="first test sample (1-based)")
    where.add_argument("--at-s", type=float, help="first test sample as seconds from the start")
    p.add_argument("--out-dir", required=True, help="directory for train_* and test_* files")
    p.set_defaults(handler=cmd_split)
    return parser


def format_error(code: str, message: str) -> str:
    flat = " ".join(str(message).split())
    escaped = flat.replace("\\", "\\\\").replace('"', '\\"')
    return f'error code={code} message="{escaped}"'


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except IngestError as e:
        for diagnostic in e.diagnostics:
            logger.info(str(diagnostic))
        code, message = e.diagnostics[0].code if e.diagnostics else e.code, str(e)
    except DomainError as e:
        code, message = e.code, str(e)
    except ValidationError as e:
        code, message = "config", str(e)
    except OSError as e:
        code, message = "io", f"{e.strerror}: {e.filename}" if e.filename else str(e)
    print(format_error(code, message), file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
