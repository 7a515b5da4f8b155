"""Local maxima of tap profiles and their sub-sample refinement."""

import numpy as np


def peak_mask(taps: np.ndarray) -> np.ndarray:
    """Returns a mask of strict-left local maxima; boundary taps are never peaks."""
    values = np.asarray(taps)
    mask = np.zeros(values.size, dtype=bool)
    if values.size >= 3:
        mask[1:-1] = (values[1:-1] > values[:-2]) & (values[1:-1] >= values[2:])
    return mask


def is_peak(taps: np.ndarray, n: int) -> bool:
    """Tells whether tap `n` is a local maximum."""
    values = np.asarray(taps)
    if not 0 < n < values.size - 1:
        return False
    return bool(values[n] > values[n - 1] and values[n] >= values[n + 1])


def refine_peak(taps: np.ndarray, n: int) -> float:
    """Returns the vertex of the parabola through taps n-1, n and n+1."""
    values = np.asarray(taps, dtype=np.float64)
    if not 0 < n < values.size - 1:
        return float(n)
    left, center, right = values[n - 1], values[n], values[n + 1]
    curvature = left - 2.0 * center + right
    if curvature >= 0.0:
        return float(n)
    offset = 0.5 * (left - right) / curvature
    return float(n + np.clip(offset, -0.5, 0.5))
