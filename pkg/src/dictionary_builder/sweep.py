# src/dictionary_builder/sweep.py
"""Zero-false-positive nearest-neighbor sweep over a distance profile."""
import logging
import math
from typing import Iterator, List, Literal, Optional, Sequence

import numpy as np

from src.distance_profile.engine import ProfileEngine
from src.distance_profile.profile import DistanceProfile, exclusion_half_width, fast_profile
from src.dictionary_builder.models import CandidateScore
from src.series_core.errors import DomainError
from src.series_core.stats import ArrayLike
from src.series_core.types import DEFAULT_EPSILON, LabelInterval, label_mask

logger = logging.getLogger(__name__)

Membership = Literal["start", "overlap"]

_FIRST_BATCH = 256


def ascending_order(distances: np.ndarray, batch: int = _FIRST_BATCH) -> Iterator[int]:
    """Finite entries by ascending (distance, index).

    Sorting is done in growing batches, since most sweeps stop after a
    handful of entries.
    """
    n_finite = int(np.count_nonzero(np.isfinite(distances)))
    emitted = 0
    k = batch
    while emitted < n_finite:
        k = min(k, n_finite)
        kth = np.partition(distances, k - 1)[k - 1]
        idx = np.flatnonzero(distances <= kth)
        order = idx[np.lexsort((idx, distances[idx]))]
        for i in order[emitted:]:
            yield int(i)
        emitted = order.size
        k *= 4


def positive_starts(
    n_profile: int,
    m: int,
    labels: Sequence[LabelInterval],
    target_class: str,
    membership: Membership = "start",
) -> np.ndarray:
    """True at window starts that count as inside a ``target_class`` interval.

    ``start``: the start index lies inside the interval.
    ``overlap``: more than half of the window lies inside target intervals.
    """
    if membership == "start":
        return label_mask(n_profile, labels, target_class)
    inside = label_mask(n_profile + m - 1, labels, target_class).astype(np.int64)
    covered = np.convolve(inside, np.ones(m, dtype=np.int64), mode="valid")
    return covered * 2 > m


def sweep_profile(
    distances: np.ndarray,
    positive: np.ndarray,
    m: int,
    query_position: Optional[int] = None,
    max_threshold: Optional[float] = None,
) -> CandidateScore:
    """Walk the profile in ascending order until the first negative position.

    Each accepted true positive masks ``± ceil(m/2)`` around itself. The
    terminating negative counts as a false positive when nothing was accepted
    yet or when it ties the current threshold. A walk cut off by
    ``max_threshold`` records that bound as its stop distance.
    """
    half = exclusion_half_width(m)
    blocked = np.zeros(distances.size, dtype=bool)
    tp = 0
    fp = 0
    threshold = 0.0
    stop = math.inf
    matched: List[int] = []
    for i in ascending_order(distances):
        d = float(distances[i])
        if max_threshold is not None and d > max_threshold:
            stop = max_threshold
            break
        if blocked[i]:
            continue
        if positive[i]:
            tp += 1
            threshold = d
            matched.append(i)
            blocked[max(i - half, 0) : i + half + 1] = True
        else:
            stop = d
            if tp == 0 or d <= threshold:
                fp = 1
            break
    return CandidateScore(
        query_position=query_position,
        length=m,
        true_positives=tp,
        false_positives=fp,
        threshold_distance=threshold,
        stop_distance=stop,
        matched_positions=tuple(matched),
    )


def nn_sweep(
    series: ArrayLike,
    query: ArrayLike,
    labels: Sequence[LabelInterval],
    target_class: str,
    *,
    query_position: Optional[int] = None,
    engine: Optional[ProfileEngine] = None,
    epsilon: float = DEFAULT_EPSILON,
    membership: Membership = "start",
    max_threshold: Optional[float] = None,
) -> CandidateScore:
    """Score ``query`` against the training ``series`` for ``target_class``.

    Only ``target_class`` intervals are positive; other classes and unlabeled
    regions are negative.
    """
    if not labels:
        raise DomainError("nn_sweep needs at least one label interval")
    if engine is not None:
        profile = engine.profile(query)
    else:
        profile = fast_profile(series, query, epsilon)
    return sweep_from_profile(profile, labels, target_class, query_position, membership, max_threshold)


def sweep_from_profile(
    profile: DistanceProfile,
    labels: Sequence[LabelInterval],
    target_class: str,
    query_position: Optional[int] = None,
    membership: Membership = "start",
    max_threshold: Optional[float] = None,
) -> CandidateScore:
    positive = positive_starts(len(profile), profile.query_length, labels, target_class, membership)
    score = sweep_profile(profile.distances, positive, profile.query_length, query_position, max_threshold)
    logger.debug(
        f"sweep q={query_position} m={profile.query_length}: "
        f"TP={score.true_positives} FP={score.false_positives} dist={score.threshold_distance:.6f}"
    )
    return score
