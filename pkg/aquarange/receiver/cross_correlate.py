"""Normalized cross-correlation of a stream segment with the preamble template."""

from dataclasses import dataclass
from typing import Optional, Union
import numpy as np
from scipy.signal import fftconvolve
from aquarange.exceptions import ParameterError
from aquarange.waveform import Preamble

ENERGY_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class CorrelationResult:
    """Normalized correlation per lag and its strongest lag."""

    series: np.ndarray
    peak_index: Optional[int]
    peak_value: float


def normalized_correlation(segment: np.ndarray, template: np.ndarray) -> np.ndarray:
    """Returns the correlation per lag normalized by both window and template energy."""
    raw = fftconvolve(segment, template[::-1], mode="valid")
    cumulative = np.concatenate([[0.0], np.cumsum(segment.astype(np.float64) ** 2)])
    window_energy = np.clip(
        cumulative[template.size :] - cumulative[: -template.size], 0.0, None
    )
    template_energy = float(np.dot(template, template))
    floor = ENERGY_FLOOR * max(float(window_energy.max(initial=0.0)), template_energy)
    series = np.zeros_like(raw)
    valid = window_energy > floor
    series[valid] = raw[valid] / np.sqrt(window_energy[valid] * template_energy)
    return series


def cross_correlate(
    stream_segment: np.ndarray, template: Union[Preamble, np.ndarray]
) -> CorrelationResult:
    """Returns the normalized cross-correlation and the lag of its largest magnitude.

    Parameters
    ----------
    stream_segment : np.ndarray
        Received samples, at least as long as the template.
    template : Union[Preamble, np.ndarray]
        Preamble or raw template samples.
    """
    samples = template.samples if isinstance(template, Preamble) else np.asarray(template)
    segment = np.asarray(stream_segment, dtype=np.float64)
    if segment.size < samples.size:
        raise ParameterError(
            f"Segment of {segment.size} samples is shorter than the "
            f"template of {samples.size} samples."
        )
    series = normalized_correlation(segment, samples)
    magnitude = np.abs(series)
    if not np.any(magnitude > 0):
        return CorrelationResult(series=series, peak_index=None, peak_value=0.0)
    peak = int(np.argmax(magnitude))
    return CorrelationResult(series=series, peak_index=peak, peak_value=float(magnitude[peak]))
