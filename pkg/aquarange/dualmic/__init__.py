"""Submodule locating the direct path with two microphones."""

from aquarange.dualmic.params import DualMicParams
from aquarange.dualmic.noise_floor import noise_floor
from aquarange.dualmic.peaks import peak_mask, is_peak, refine_peak
from aquarange.dualmic.direct_path import (
    qualifying_taps,
    find_direct_pair,
    find_direct_path,
    brute_force_direct_path,
    find_first_peak,
    candidate_table,
    refine_arrival,
)

__all__ = [
    "DualMicParams",
    "noise_floor",
    "peak_mask",
    "is_peak",
    "refine_peak",
    "qualifying_taps",
    "find_direct_pair",
    "find_direct_path",
    "brute_force_direct_path",
    "find_first_peak",
    "candidate_table",
    "refine_arrival",
]
