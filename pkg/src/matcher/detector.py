# src/matcher/detector.py
import bisect
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from src.dictionary_builder.models import Dictionary, QueryTemplate
from src.distance_profile.engine import ProfileEngine
from src.distance_profile.profile import window_distance
from src.matcher.models import MatchEvent
from src.series_core.errors import DomainError, MissingAxisError, SampleRateError, WindowLengthError
from src.series_core.stats import z_normalize
from src.series_core.types import DEFAULT_EPSILON, Axis, MultiAxisSeries

logger = logging.getLogger(__name__)

# FFT distances only preselect positions; the strict threshold test uses
# directly computed distances.
_PREFILTER_MARGIN = 1e-6


@dataclass(frozen=True)
class RawMatch:
    start_index: int
    anchor_distance: float
    per_axis_distance: Dict[Axis, float]


class TemplateMatcher:
    """Finds dictionary templates in unlabeled multi-axis streams."""

    def __init__(self, dictionary: Dictionary, epsilon: float = DEFAULT_EPSILON, workers: int = 1):
        self.dictionary = dictionary
        self.epsilon = epsilon
        self.workers = max(1, int(workers))
        self._query_z = {
            t.behavior_class: {a: z_normalize(at.values, epsilon) for a, at in t.axis_templates.items()}
            for t in dictionary.templates
        }
        logger.info(
            f"TemplateMatcher initialized with {len(dictionary)} templates {dictionary.classes}"
        )

    def check_stream(self, series: MultiAxisSeries) -> None:
        training = self.dictionary.build_metadata.training
        if training is not None and not math.isclose(series.sample_rate_hz, training.sample_rate_hz, rel_tol=1e-9):
            raise SampleRateError(
                f"stream is sampled at {series.sample_rate_hz:g} Hz but the dictionary was trained at "
                f"{training.sample_rate_hz:g} Hz; template lengths are in samples, resample first"
            )
        for template in self.dictionary.templates:
            for axis in template.axes:
                if axis not in series.axes:
                    raise MissingAxisError(
                        f"template '{template.behavior_class}' needs axis {axis.value}, "
                        f"which the stream lacks"
                    )
        if self.dictionary.templates and series.length < self.dictionary.max_length:
            raise WindowLengthError(
                f"stream of {series.length} samples is shorter than the longest template "
                f"({self.dictionary.max_length} samples)"
            )

    def match_stream(self, series: MultiAxisSeries) -> List[MatchEvent]:
        """Events over the whole stream, sorted by start index."""
        self.check_stream(series)
        raw = self._segment_raw_matches(series, 0, series.length, series.length)
        return self._reduce(series, raw)

    def match_windowed(self, series: MultiAxisSeries, chunk: int, overlap: int) -> List[MatchEvent]:
        """Same events as ``match_stream``, profiling at most ``chunk`` samples at a time."""
        self.check_stream(series)
        required = max(
            (t.length_samples + t.exclusion_half_width for t in self.dictionary.templates), default=0
        )
        if overlap < required:
            raise DomainError(f"overlap {overlap} is below the required {required} samples")
        if chunk <= 2 * overlap:
            raise DomainError(f"chunk {chunk} must exceed twice the overlap ({2 * overlap})")

        n = series.length
        step = chunk - overlap
        raw: Dict[str, List[RawMatch]] = {t.behavior_class: [] for t in self.dictionary.templates}
        start = 0
        segments = 0
        while True:
            stop = min(start + chunk, n)
            owned_stop = n if stop == n else start + step
            for name, matches in self._segment_raw_matches(series, start, stop, owned_stop).items():
                raw[name].extend(matches)
            segments += 1
            if stop == n:
                break
            start += step
        logger.info(f"Matched {n} samples in {segments} chunks (chunk={chunk}, overlap={overlap})")
        for name in raw:
            deduped = {m.start_index: m for m in raw[name]}
            raw[name] = [deduped[i] for i in sorted(deduped)]
        return self._reduce(series, raw)

    def _segment_raw_matches(
        self, series: MultiAxisSeries, start: int, stop: int, owned_stop: int
    ) -> Dict[str, List[RawMatch]]:
        """Raw matches whose start lies in ``[start, owned_stop)``, profiled on ``[start, stop)``."""
        segment = series.slice(start, stop)
        axes = sorted({a for t in self.dictionary.templates for a in t.axes}, key=Axis.order)
        engines = {a: ProfileEngine(segment.axis(a), self.epsilon) for a in axes}

        def run(template: QueryTemplate) -> Tuple[str, List[RawMatch]]:
            if segment.length < template.length_samples:
                return template.behavior_class, []
            return template.behavior_class, self._template_raw_matches(
                template, segment, engines, start, owned_stop - start
            )

        templates = list(self.dictionary.templates)
        if self.workers > 1 and len(templates) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(run, templates))
        else:
            results = [run(t) for t in templates]
        return dict(results)

    def _template_raw_matches(
        self,
        template: QueryTemplate,
        segment: MultiAxisSeries,
        engines: Dict[Axis, ProfileEngine],
        offset: int,
        owned: int,
    ) -> List[RawMatch]:
        m = template.length_samples
        query_z = self._query_z[template.behavior_class]
        candidate = None
        for axis, axis_template in template.axis_templates.items():
            d = engines[axis].profile(axis_template.values).distances[:owned]
            below = d < axis_template.threshold + _PREFILTER_MARGIN
            candidate = below if candidate is None else candidate & below

        matches = []
        for i in np.flatnonzero(candidate):
            distances = {}
            for axis, axis_template in template.axis_templates.items():
                window = segment.axis(axis).values[i : i + m]
                distances[axis] = window_distance(query_z[axis], window, self.epsilon)
                if not distances[axis] < axis_template.threshold:
                    break
            else:
                matches.append(RawMatch(offset + int(i), distances[template.anchor], distances))
        return matches

    def _reduce(self, series: MultiAxisSeries, raw: Dict[str, List[RawMatch]]) -> List[MatchEvent]:
        """Greedy best-first suppression of same-class matches within ``± ceil(m/2)``."""
        events: List[MatchEvent] = []
        rate = series.sample_rate_hz
        for template in self.dictionary.templates:
            name = template.behavior_class
            half = template.exclusion_half_width
            accepted: List[int] = []
            for match in sorted(raw.get(name, []), key=lambda r: (r.anchor_distance, r.start_index)):
                pos = bisect.bisect_left(accepted, match.start_index - half)
                if pos < len(accepted) and accepted[pos] <= match.start_index + half:
                    continue
                bisect.insort(accepted, match.start_index)
                events.append(
                    MatchEvent(
                        behavior_class=name,
                        start_index=match.start_index,
                        start_time_s=match.start_index / rate,
                        length=template.length_samples,
                        per_axis_distance=match.per_axis_distance,
                    )
                )
            logger.info(f"Class '{name}': {len(accepted)} events from {len(raw.get(name, []))} raw matches")
        events.sort(key=MatchEvent.sort_key)
        return events


def match_stream(
    series: MultiAxisSeries, dictionary: Dictionary, epsilon: float = DEFAULT_EPSILON, workers: int = 1
) -> List[MatchEvent]:
    return TemplateMatcher(dictionary, epsilon, workers).match_stream(series)


def match_windowed(
    series: MultiAxisSeries,
    dictionary: Dictionary,
    chunk: int,
    overlap: int,
    epsilon: float = DEFAULT_EPSILON,
    workers: int = 1,
) -> List[MatchEvent]:
    return TemplateMatcher(dictionary, epsilon, workers).match_windowed(series, chunk, overlap)
