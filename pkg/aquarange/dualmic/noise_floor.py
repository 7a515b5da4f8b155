"""Noise floor of a channel estimate."""

import numpy as np
from aquarange.constants import NOISE_FLOOR_TAPS
from aquarange.exceptions import ParameterError
from aquarange.utils import tail_power


def noise_floor(taps: np.ndarray) -> float:
    """Returns the mean power of the last 100 taps."""
    values = np.asarray(taps)
    if values.size < NOISE_FLOOR_TAPS:
        raise ParameterError(
            f"At least {NOISE_FLOOR_TAPS} taps are needed, got {values.size}."
        )
    return tail_power(values, NOISE_FLOOR_TAPS)
