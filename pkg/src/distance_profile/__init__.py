# Distance profile module
from src.distance_profile.engine import ProfileEngine
from src.distance_profile.profile import (
    DistanceProfile,
    ExclusionZone,
    apply_exclusion,
    exclusion_half_width,
    fast_profile,
    naive_profile,
    window_distance,
)
from src.distance_profile.symbolic import encode_symbols, mismatch_profile
