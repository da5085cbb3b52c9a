# src/evaluation/frequency.py
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.config import DEFAULT_WINDOW_S
from src.matcher.models import MatchEvent
from src.series_core.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FrequencyProfile:
    """Per-class event counts over sliding windows ``[start, start + window)``."""

    window_length_s: float
    stride_s: float
    window_starts: np.ndarray
    window_ends: np.ndarray
    counts: Dict[str, np.ndarray]

    @property
    def classes(self) -> List[str]:
        return list(self.counts)

    def total(self, behavior_class: str) -> int:
        return int(self.counts[behavior_class].sum())

    def to_frame(self, origin_s: Optional[float] = None) -> pd.DataFrame:
        """Plot-ready table; ``origin_s`` is the stream start as seconds after midnight."""
        frame = pd.DataFrame({"window_start_s": self.window_starts, "window_end_s": self.window_ends})
        if origin_s is not None:
            frame["window_start_clock"] = [clock_label(origin_s + s) for s in self.window_starts]
        for name, values in self.counts.items():
            frame[name] = values
        return frame


def clock_label(seconds: float) -> str:
    total = int(math.floor(seconds)) % 86400
    hours, rest = divmod(total, 3600)
    minutes, secs = divmod(rest, 60)
    return f"{hours:02d}:{minutes:02d}:{secs:02d}"


def parse_clock(text: str) -> float:
    """'HH:MM[:SS]' to seconds after midnight."""
    parts = text.strip().split(":")
    if len(parts) not in (2, 3) or not all(p.isdigit() for p in parts):
        raise DomainError(f"invalid time of day '{text}' (expected HH:MM or HH:MM:SS)")
    hours, minutes, secs = (int(p) for p in parts + ["0"] * (3 - len(parts)))
    if hours > 23 or minutes > 59 or secs > 59:
        raise DomainError(f"invalid time of day '{text}'")
    return float(hours * 3600 + minutes * 60 + secs)


def frequency_profile(
    events: Iterable[MatchEvent],
    span: Tuple[float, float],
    window_length_s: float = DEFAULT_WINDOW_S,
    stride_s: Optional[float] = None,
    classes: Optional[Sequence[str]] = None,
) -> FrequencyProfile:
    """Count events per class in windows anchored at ``t0 + k * stride``.

    Windows start at every anchor before ``t1`` and are clipped to ``t1``.
    """
    t0, t1 = span
    stride_s = window_length_s if stride_s is None else stride_s
    if not t0 < t1:
        raise DomainError(f"empty span [{t0}, {t1})")
    if not 0 < window_length_s <= t1 - t0:
        raise DomainError(f"window length {window_length_s} s does not fit the span of {t1 - t0} s")
    if not stride_s > 0:
        raise DomainError(f"stride must be positive, got {stride_s}")

    n_windows = int(math.ceil((t1 - t0) / stride_s))
    starts = t0 + np.arange(n_windows) * stride_s
    starts = starts[starts < t1]
    ends = np.minimum(starts + window_length_s, t1)

    events = list(events)
    names = list(classes or [])
    names += sorted({e.behavior_class for e in events} - set(names))
    counts: Dict[str, np.ndarray] = {}
    for name in names:
        times = np.sort(np.array([e.start_time_s for e in events if e.behavior_class == name], dtype=np.float64))
        counts[name] = np.searchsorted(times, ends, side="left") - np.searchsorted(times, starts, side="left")
    logger.info(f"Frequency profile: {starts.size} windows of {window_length_s} s over {len(names)} classes")
    return FrequencyProfile(window_length_s, stride_s, starts, ends, counts)
