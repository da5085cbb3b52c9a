# src/distance_profile/engine.py
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import fft as sp_fft

from src.distance_profile.profile import (
    DistanceProfile,
    fft_size,
    prepare_query,
    profile_from_dot,
    sliding_dot_product,
)
from src.series_core.stats import ArrayLike, as_values, sliding_mean_std
from src.series_core.types import DEFAULT_EPSILON

logger = logging.getLogger(__name__)


class ProfileEngine:
    """Distance profiles of many queries against one fixed series.

    The series FFT and the sliding statistics for each window length are
    computed once and shared by every query.
    """

    def __init__(self, series: ArrayLike, epsilon: float = DEFAULT_EPSILON, workers: int = 1):
        self.values = as_values(series)
        self.epsilon = epsilon
        self.workers = max(1, int(workers))
        self.nfft = fft_size(self.values.size)
        self._centered = self.values - self.values.mean()
        self._series_fft = sp_fft.rfft(self._centered, self.nfft)
        self._stats: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()
        logger.debug(f"ProfileEngine ready: n={self.values.size}, nfft={self.nfft}, workers={self.workers}")

    def __len__(self) -> int:
        return int(self.values.size)

    def stats(self, m: int) -> Tuple[np.ndarray, np.ndarray]:
        """Cached sliding (means, stds) for window length ``m``."""
        with self._lock:
            cached = self._stats.get(m)
        if cached is None:
            cached = sliding_mean_std(self.values, m)
            with self._lock:
                cached = self._stats.setdefault(m, cached)
        return cached

    def profile(self, query: ArrayLike) -> DistanceProfile:
        q_z = prepare_query(query, self.values.size, self.epsilon)
        m = q_z.size
        qt = sliding_dot_product(q_z, self._centered, self.nfft, self._series_fft)
        _, stds = self.stats(m)
        return DistanceProfile(profile_from_dot(qt, stds, m, self.epsilon), m, self.values.size)

    def profile_at(self, start: int, m: int) -> DistanceProfile:
        """Profile of the bound series' own window ``[start, start + m)``."""
        return self.profile(self.values[start : start + m])

    def profiles(self, queries: Sequence[ArrayLike]) -> List[DistanceProfile]:
        """Batched profiles in input order; concurrent when ``workers > 1``."""
        if self.workers == 1 or len(queries) < 2:
            return [self.profile(q) for q in queries]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(self.profile, queries))
