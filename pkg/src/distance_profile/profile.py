# src/distance_profile/profile.py
"""Z-normalized Euclidean distance profiles.

``naive_profile`` computes every window directly and serves as the oracle
for ``fast_profile``, which uses an FFT sliding dot product and sliding
statistics (the MASS construction).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import fft as sp_fft

from src.series_core.errors import FlatSequenceError
from src.series_core.stats import ArrayLike, as_values, check_window_length, is_flat, sliding_mean_std, z_normalize
from src.series_core.types import DEFAULT_EPSILON, MIN_QUERY_LENGTH

logger = logging.getLogger(__name__)

_NAIVE_BLOCK_ROWS = 4096


@dataclass(frozen=True, eq=False)
class DistanceProfile:
    """Distances from one query to every window of a series; flat windows are +inf."""

    distances: np.ndarray
    query_length: int
    source_length: int

    def __post_init__(self) -> None:
        expected = self.source_length - self.query_length + 1
        if self.distances.shape != (expected,):
            raise ValueError(
                f"profile has {self.distances.shape} entries, expected ({expected},)"
            )

    def __len__(self) -> int:
        return int(self.distances.size)

    def argmin(self) -> int:
        return int(np.argmin(self.distances))


def exclusion_half_width(m: int) -> int:
    return int(math.ceil(m / 2))


@dataclass(frozen=True)
class ExclusionZone:
    """Entries within ``center ± half_width`` are masked to +inf."""

    center: int
    half_width: int

    @classmethod
    def around(cls, center: int, m: int) -> "ExclusionZone":
        return cls(center, exclusion_half_width(m))


def apply_exclusion(profile: DistanceProfile, zone: ExclusionZone) -> DistanceProfile:
    """Copy of ``profile`` with the zone set to +inf, clipped to the valid range."""
    distances = profile.distances.copy()
    lo = max(zone.center - zone.half_width, 0)
    hi = min(zone.center + zone.half_width, distances.size - 1)
    if lo <= hi:
        distances[lo : hi + 1] = np.inf
    return DistanceProfile(distances, profile.query_length, profile.source_length)


def prepare_query(query: ArrayLike, n: int, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """Validate a query against a series of length ``n`` and return it z-normalized."""
    q = as_values(query)
    check_window_length(q.size, n, MIN_QUERY_LENGTH)
    if is_flat(q, epsilon):
        raise FlatSequenceError(f"query of length {q.size} is flat (std < {epsilon:g})")
    return z_normalize(q, epsilon)


def window_distance(query_z: np.ndarray, window: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> float:
    """Distance between a z-normalized query and one raw window.

    Plain numpy reductions only, so the value depends on the window's samples
    and nothing else.
    """
    window = np.array(window, dtype=np.float64)
    if np.std(window) < epsilon:
        return math.inf
    diff = query_z - z_normalize(window, epsilon)
    return float(np.sqrt(np.sum(diff * diff)))


def naive_profile(series: ArrayLike, query: ArrayLike, epsilon: float = DEFAULT_EPSILON) -> DistanceProfile:
    """Per-window z-normalization and Euclidean norm."""
    t = as_values(series)
    q_z = prepare_query(query, t.size, epsilon)
    m = q_z.size
    windows = sliding_window_view(t, m)
    out = np.empty(windows.shape[0])
    for lo in range(0, windows.shape[0], _NAIVE_BLOCK_ROWS):
        block = windows[lo : lo + _NAIVE_BLOCK_ROWS]
        mu = block.mean(axis=1, keepdims=True)
        sigma = block.std(axis=1, keepdims=True)
        flat = sigma[:, 0] < epsilon
        z = (block - mu) / np.where(sigma < epsilon, 1.0, sigma)
        d = np.linalg.norm(z - q_z, axis=1)
        d[flat] = np.inf
        out[lo : lo + block.shape[0]] = d
    return DistanceProfile(out, m, t.size)


def fft_size(n: int) -> int:
    """Next power of two >= n."""
    return 1 << max(int(n) - 1, 0).bit_length()


def sliding_dot_product(
    query: np.ndarray,
    series: np.ndarray,
    nfft: Optional[int] = None,
    series_fft: Optional[np.ndarray] = None,
) -> np.ndarray:
    """``out[i] = dot(query, series[i : i + m])`` via one FFT product.

    With ``nfft >= n`` the circular wrap only touches entries below ``m - 1``,
    which are discarded.
    """
    n, m = series.size, query.size
    nfft = fft_size(n) if nfft is None else nfft
    if series_fft is None:
        series_fft = sp_fft.rfft(series, nfft)
    product = sp_fft.rfft(query[::-1], nfft) * series_fft
    return sp_fft.irfft(product, nfft)[m - 1 : n]


def profile_from_dot(
    qt: np.ndarray, stds: np.ndarray, m: int, epsilon: float = DEFAULT_EPSILON
) -> np.ndarray:
    """Distances from sliding dot products of a z-normalized query.

    With a zero-mean unit-std query the correlation term reduces to
    ``qt / (m * sigma_i)``, so ``d = sqrt(2m (1 - corr))``.
    """
    flat = stds < epsilon
    safe = np.where(flat, 1.0, stds)
    corr = np.clip(qt / (m * safe), -1.0, 1.0)
    radicand = np.maximum(2.0 * m * (1.0 - corr), 0.0)
    d = np.sqrt(radicand)
    d[flat] = np.inf
    return d


def fast_profile(series: ArrayLike, query: ArrayLike, epsilon: float = DEFAULT_EPSILON) -> DistanceProfile:
    """O(n log n) distance profile; same contract as ``naive_profile``."""
    t = as_values(series)
    q_z = prepare_query(query, t.size, epsilon)
    m = q_z.size
    # centering does not change dot products with a zero-mean query
    centered = t - t.mean()
    qt = sliding_dot_product(q_z, centered)
    _, stds = sliding_mean_std(t, m)
    return DistanceProfile(profile_from_dot(qt, stds, m, epsilon), m, t.size)
