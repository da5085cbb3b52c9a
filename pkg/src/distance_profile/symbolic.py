# src/distance_profile/symbolic.py
"""Mismatch-count profiles over symbol sequences.

The discrete analogue of the z-normalized search: a string is encoded as
integer codes and the distance of a window is the number of positions where
it differs from the query.
"""
from typing import Sequence, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.distance_profile.profile import DistanceProfile
from src.series_core.stats import check_window_length


def encode_symbols(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)


def mismatch_profile(
    symbols: Union[np.ndarray, Sequence[int]], query: Union[np.ndarray, Sequence[int]]
) -> DistanceProfile:
    s = np.asarray(symbols)
    q = np.asarray(query)
    check_window_length(q.size, s.size)
    mismatches = (sliding_window_view(s, q.size) != q).sum(axis=1)
    return DistanceProfile(mismatches.astype(np.float64), int(q.size), int(s.size))
