"""Mean power over the tail of a tap profile."""

import numpy as np


def tail_power(taps: np.ndarray, count: int) -> float:
    """Returns the mean squared magnitude of the last `count` taps."""
    tail = np.asarray(taps)[-count:]
    return float(np.mean(np.abs(tail) ** 2))
