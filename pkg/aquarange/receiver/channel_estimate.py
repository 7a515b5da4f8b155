"""Least-squares channel estimation over the preamble symbols."""

from dataclasses import dataclass
from typing import Any, Dict, Optional
import numpy as np
from scipy import fft as sp_fft
from scipy.signal import windows
from aquarange.constants import CHANNEL_LENGTH, NOISE_FLOOR_TAPS
from aquarange.exceptions import ParameterError
from aquarange.utils import tail_power
from aquarange.waveform import WaveformSpec, symbol_spectrum

MIC_IDS = ("bottom", "top")


@dataclass(frozen=True, eq=False)
class ChannelEstimate:
    """Normalized channel magnitude seen by one microphone.

    Tap `reference_tap` corresponds to the coarse detection index.
    """

    taps: np.ndarray
    noise_floor: float
    mic_id: str
    reference_tap: int = 0
    empty: bool = False

    def __len__(self) -> int:
        """Number of taps in the estimate."""
        return int(self.taps.size)

    @classmethod
    def from_taps(
        cls, taps: np.ndarray, mic_id: str = "bottom", reference_tap: int = 0
    ) -> "ChannelEstimate":
        """Builds an estimate from raw magnitudes, normalizing them to a peak of one."""
        magnitudes = np.abs(np.asarray(taps, dtype=np.float64))
        if magnitudes.size < NOISE_FLOOR_TAPS:
            raise ParameterError(
                f"A channel estimate needs at least {NOISE_FLOOR_TAPS} taps, "
                f"got {magnitudes.size}."
            )
        peak = float(magnitudes.max())
        if peak == 0.0:
            return cls(
                taps=magnitudes,
                noise_floor=0.0,
                mic_id=mic_id,
                reference_tap=reference_tap,
                empty=True,
            )
        normalized = magnitudes / peak
        return cls(
            taps=normalized,
            noise_floor=tail_power(normalized, NOISE_FLOOR_TAPS),
            mic_id=mic_id,
            reference_tap=reference_tap,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Returns a summary of the estimate for debug records."""
        return {
            "mic_id": self.mic_id,
            "peak_tap": int(np.argmax(self.taps)),
            "noise_floor": self.noise_floor,
            "reference_tap": self.reference_tap,
            "empty": self.empty,
        }


def extract_symbols(
    stream: np.ndarray, start_index: int, spec: WaveformSpec, guard: int = 0
) -> np.ndarray:
    """Returns the eight FFT windows of a preamble starting at `start_index`.

    Each window begins `guard` samples before the end of its cyclic prefix,
    so taps arriving up to `guard` samples early stay in the estimate.
    Samples outside the stream are read as zeros.
    """
    if not 0 <= guard <= spec.cp_len:
        raise ParameterError(f"guard must lie in [0, {spec.cp_len}], got {guard}.")
    samples = np.asarray(stream, dtype=np.float64)
    symbols = np.zeros((len(spec.pn_signs), spec.fft_size))
    for i in range(len(spec.pn_signs)):
        start = start_index + i * spec.symbol_len + spec.cp_len - guard
        low, high = max(start, 0), min(start + spec.fft_size, samples.size)
        if high > low:
            symbols[i, low - start : high - start] = samples[low:high]
    return symbols


def timing_reference(spec: WaveformSpec, guard: int = 0) -> float:
    """Preamble sample whose arrival the averaged estimate times.

    The LS average over the eight windows measures the delay at the mean
    window center, so a skewed speaker clock, which stretches the preamble,
    moves every estimate relative to the first sample but not relative to
    this one.
    """
    symbols = len(spec.pn_signs)
    return spec.symbol_len * (symbols - 1) / 2.0 + spec.cp_len - guard + spec.fft_size / 2.0


def estimate_channel(
    received_symbols: np.ndarray,
    spec: WaveformSpec,
    mic_id: str,
    length: int = CHANNEL_LENGTH,
    taper: Optional[str] = "hann",
    reference_tap: int = 0,
) -> ChannelEstimate:
    """Returns the LS estimate averaged over the PN-corrected symbols.

    Parameters
    ----------
    received_symbols : np.ndarray
        Array of shape (8, fft_size) as returned by `extract_symbols`.
    spec : WaveformSpec
        Waveform the symbols were transmitted with.
    mic_id : str
        Either "bottom" or "top".
    length : int
        Number of taps kept.
    taper : Optional[str]
        Either "hann", weighting the active bins before the inverse FFT, or None.
    reference_tap : int
        Tap index matching the coarse detection index.
    """
    symbols = np.asarray(received_symbols, dtype=np.float64)
    if symbols.shape != (len(spec.pn_signs), spec.fft_size):
        raise ParameterError(
            f"Expected symbols of shape {(len(spec.pn_signs), spec.fft_size)}, "
            f"got {symbols.shape}."
        )
    if mic_id not in MIC_IDS:
        raise ParameterError(f"mic_id must be one of {MIC_IDS}, got '{mic_id}'.")
    if length < NOISE_FLOOR_TAPS:
        raise ParameterError(f"length must be at least {NOISE_FLOOR_TAPS}, got {length}.")
    bins = spec.pilot_bins
    received = sp_fft.rfft(symbols, axis=1)[:, bins]
    signs = np.asarray(spec.pn_signs, dtype=np.float64)[:, None]
    response = np.mean(received * signs, axis=0) / symbol_spectrum(spec)[bins]
    if taper not in ("hann", None):
        raise ParameterError(f"taper must be 'hann' or None, got '{taper}'.")
    if taper == "hann":
        response = response * windows.hann(bins.size + 2)[1:-1]
    spectrum = np.zeros(spec.fft_size, dtype=np.complex128)
    spectrum[bins] = response
    magnitudes = np.abs(sp_fft.ifft(spectrum))
    if magnitudes.size >= length:
        magnitudes = magnitudes[:length]
    else:
        magnitudes = np.pad(magnitudes, (0, length - magnitudes.size))
    return ChannelEstimate.from_taps(magnitudes, mic_id=mic_id, reference_tap=reference_tap)
