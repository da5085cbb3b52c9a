# src/dictionary_builder/builder.py
"""Dictionary learning from weakly labeled training data.

Every window inside a labeled region, for every length in the configured
range, is scored with the zero-false-positive sweep; the best candidate per
class becomes that class's template.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import BuildConfig, ClassBuildConfig
from src.distance_profile.engine import ProfileEngine
from src.distance_profile.symbolic import mismatch_profile
from src.dictionary_builder.models import (
    AxisTemplate,
    BuildMetadata,
    CandidateScore,
    ClassSearchSummary,
    Dictionary,
    QueryTemplate,
    TrainingIdentity,
)
from src.dictionary_builder.sweep import Membership, nn_sweep, sweep_from_profile
from src.series_core.errors import (
    DomainError,
    MissingAxisError,
    NoConservedTemplateError,
    WindowLengthError,
)
from src.series_core.stats import is_flat
from src.series_core.types import (
    DEFAULT_EPSILON,
    MIN_QUERY_LENGTH,
    Axis,
    LabelInterval,
    MultiAxisSeries,
    intervals_of,
)

logger = logging.getLogger(__name__)

LengthRange = Tuple[int, int, int]
Window = Tuple[int, int]  # (start, length)


def clip_lengths(
    length_range: LengthRange,
    intervals: Sequence[LabelInterval],
    target_class: str,
    minimum: int = MIN_QUERY_LENGTH,
) -> range:
    """Lengths to search, clipped so every candidate fits the shortest interval."""
    min_m, max_m, step = length_range
    if min_m < minimum:
        raise WindowLengthError(f"minimum length {min_m} is below {minimum} samples")
    if step < 1:
        raise WindowLengthError(f"length step must be >= 1, got {step}")
    if not intervals:
        raise DomainError(f"no labeled intervals for class '{target_class}'")
    shortest = min(lab.length for lab in intervals)
    lengths = range(min_m, min(max_m, shortest) + 1, step)
    if len(lengths) == 0:
        raise WindowLengthError(
            f"length range {min_m}..{max_m} is empty after clipping to the shortest "
            f"'{target_class}' interval ({shortest} samples)"
        )
    return lengths


def candidate_windows(
    intervals: Sequence[LabelInterval], lengths: range, stride: int = 1
) -> List[Window]:
    """(start, length) pairs lying entirely inside an interval, in search order."""
    return [
        (q, m)
        for m in lengths
        for lab in intervals
        for q in range(lab.start_index, lab.end_index - m + 2, stride)
    ]


def _score_all(score: Callable[[Window], CandidateScore], windows: List[Window], workers: int) -> List[CandidateScore]:
    if workers <= 1 or len(windows) < 2:
        return [score(w) for w in windows]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(score, windows))


def enumerate_candidates(
    series: MultiAxisSeries,
    labels: Sequence[LabelInterval],
    target_class: str,
    length_range: LengthRange,
    *,
    axis: Optional[Axis] = None,
    stride: int = 1,
    engine: Optional[ProfileEngine] = None,
    epsilon: float = DEFAULT_EPSILON,
    membership: Membership = "start",
    max_threshold: Optional[float] = None,
    workers: int = 1,
) -> List[CandidateScore]:
    """Score every in-region window of the designated axis.

    Flat windows (std below ``epsilon``) cannot be z-normalized and are
    skipped.
    """
    axis = axis if axis is not None else series.axis_ids[0]
    intervals = intervals_of(labels, target_class)
    lengths = clip_lengths(length_range, intervals, target_class)
    if engine is None:
        engine = ProfileEngine(series.axis(axis), epsilon, workers)
    windows = candidate_windows(intervals, lengths, stride)
    values = series.axis(axis).values
    kept = [(q, m) for q, m in windows if not is_flat(values[q : q + m], epsilon)]
    if len(kept) < len(windows):
        logger.debug(f"Skipped {len(windows) - len(kept)} flat '{target_class}' windows on axis {axis.value}")

    def score(window: Window) -> CandidateScore:
        q, m = window
        return sweep_from_profile(
            engine.profile_at(q, m), labels, target_class, q, membership, max_threshold
        )

    return _score_all(score, kept, workers)


def enumerate_symbol_candidates(
    symbols: np.ndarray,
    labels: Sequence[LabelInterval],
    target_class: str,
    length_range: LengthRange,
    *,
    stride: int = 1,
    max_threshold: Optional[float] = 0.0,
) -> List[CandidateScore]:
    """Same search over an integer symbol sequence with mismatch distance.

    ``max_threshold=0`` only accepts exact recurrences.
    """
    intervals = intervals_of(labels, target_class)
    lengths = clip_lengths(length_range, intervals, target_class, minimum=1)
    return [
        sweep_from_profile(
            mismatch_profile(symbols, symbols[q : q + m]), labels, target_class, q, "start", max_threshold
        )
        for q, m in candidate_windows(intervals, lengths, stride)
    ]


def best_candidate(candidates: Sequence[CandidateScore], target_class: str) -> CandidateScore:
    """Max TP, then max length, then min threshold, then smallest position; FP must be 0."""
    if not candidates:
        raise NoConservedTemplateError(target_class, "no candidates were scored")
    eligible = [c for c in candidates if c.eligible]
    if not eligible:
        raise NoConservedTemplateError(
            target_class, f"none of {len(candidates)} candidates has TP >= 1 with FP = 0"
        )
    return min(eligible, key=CandidateScore.rank_key)


def template_threshold(score: CandidateScore, rule: str = "last_tp") -> float:
    """Threshold stored in the template for a winning score.

    ``last_tp`` is the next float above the worst accepted TP distance, so
    the strict ``<`` test at match time admits that TP. ``midpoint`` sits
    halfway to the negative that ended the sweep.
    """
    if rule == "midpoint" and math.isfinite(score.stop_distance) and score.stop_distance > score.threshold_distance:
        return (score.threshold_distance + score.stop_distance) / 2.0
    if rule not in ("last_tp", "midpoint"):
        raise DomainError(f"unknown threshold rule '{rule}'")
    return float(np.nextafter(score.threshold_distance, math.inf))


def select_template(
    candidates: Sequence[CandidateScore],
    series: MultiAxisSeries,
    axis: Axis,
    target_class: str,
    threshold_rule: str = "last_tp",
) -> QueryTemplate:
    winner = best_candidate(candidates, target_class)
    values = series.axis(axis).subsequence(winner.query_position, winner.length)
    return QueryTemplate(
        behavior_class=target_class,
        axis_templates={axis: AxisTemplate(values, template_threshold(winner, threshold_rule))},
        length_samples=winner.length,
        source_position=winner.query_position,
        anchor=axis,
        training_true_positives=winner.true_positives,
    )


class DictionaryBuilder:
    """Builds one template per class of a ``BuildConfig``."""

    def __init__(self, config: BuildConfig):
        self.config = config
        self._engines: Dict[Axis, ProfileEngine] = {}
        logger.info(
            f"DictionaryBuilder initialized for classes "
            f"{[c.behavior_class for c in config.classes]} (workers={config.workers})"
        )

    def build(self, series: MultiAxisSeries, labels: Sequence[LabelInterval]) -> Dictionary:
        self._engines = {}
        templates: List[QueryTemplate] = []
        summaries: Dict[str, ClassSearchSummary] = {}
        errors: Dict[str, str] = {}
        for class_config in self.config.classes:
            name = class_config.behavior_class
            try:
                template, summary = self.build_class(series, labels, class_config)
            except DomainError as e:
                if not self.config.allow_partial:
                    raise
                logger.warning(f"Class '{name}' skipped: {e}")
                errors[name] = str(e)
                continue
            templates.append(template)
            summaries[name] = summary
        metadata = BuildMetadata(
            training=TrainingIdentity.of(series),
            classes=summaries,
            parameters=self.config.describe(),
        )
        return Dictionary(tuple(templates), metadata, errors)

    def _engine(self, series: MultiAxisSeries, axis: Axis) -> ProfileEngine:
        if axis not in self._engines:
            self._engines[axis] = ProfileEngine(series.axis(axis), self.config.epsilon, self.config.workers)
        return self._engines[axis]

    def build_class(
        self,
        series: MultiAxisSeries,
        labels: Sequence[LabelInterval],
        class_config: ClassBuildConfig,
    ) -> Tuple[QueryTemplate, ClassSearchSummary]:
        name = class_config.behavior_class
        for axis in class_config.axes:
            if axis not in series.axes:
                raise MissingAxisError(f"class '{name}' needs axis {axis.value}, which the training series lacks")
        anchor = class_config.anchor_axis
        requested = class_config.length_range(series.sample_rate_hz)
        length_range = (requested.start, requested.stop - 1, requested.step)
        intervals = intervals_of(labels, name)
        lengths = clip_lengths(length_range, intervals, name)
        windows = candidate_windows(intervals, lengths, class_config.stride)

        candidates = enumerate_candidates(
            series,
            labels,
            name,
            length_range,
            axis=anchor,
            stride=class_config.stride,
            engine=self._engine(series, anchor),
            epsilon=self.config.epsilon,
            membership=self.config.membership,
            max_threshold=self.config.max_threshold,
            workers=self.config.workers,
        )
        anchor_template = select_template(candidates, series, anchor, name, self.config.threshold_rule)
        position, m = anchor_template.source_position, anchor_template.length_samples
        axis_templates = dict(anchor_template.axis_templates)

        for axis in class_config.axes:
            if axis == anchor:
                continue
            window = series.axis(axis).subsequence(position, m)
            if is_flat(window, self.config.epsilon):
                raise NoConservedTemplateError(name, f"window at {position + 1} is flat on axis {axis.value}")
            score = nn_sweep(
                None,
                window,
                labels,
                name,
                query_position=position,
                engine=self._engine(series, axis),
                membership=self.config.membership,
                max_threshold=self.config.max_threshold,
            )
            if not score.eligible:
                raise NoConservedTemplateError(
                    name, f"axis {axis.value} window at {position + 1} ties a false positive"
                )
            axis_templates[axis] = AxisTemplate(window, template_threshold(score, self.config.threshold_rule))

        template = QueryTemplate(
            behavior_class=name,
            axis_templates=axis_templates,
            length_samples=m,
            source_position=position,
            anchor=anchor,
            training_true_positives=anchor_template.training_true_positives,
        )
        summary = ClassSearchSummary(
            axes=list(class_config.axes),
            anchor=anchor,
            min_length=lengths.start,
            max_length=lengths[-1],
            length_step=lengths.step,
            stride=class_config.stride,
            candidates_scored=len(candidates),
            flat_windows_skipped=len(windows) - len(candidates),
        )
        logger.info(
            f"Class '{name}': {len(candidates)} candidates, selected start {position + 1} "
            f"(m={m}, TP={template.training_true_positives}, axes={[a.value for a in template.axes]})"
        )
        return template, summary


def build_dictionary(
    series: MultiAxisSeries, labels: Sequence[LabelInterval], config: BuildConfig
) -> Dictionary:
    return DictionaryBuilder(config).build(series, labels)
