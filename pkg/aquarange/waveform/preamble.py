"""Synthesis of the ZC-filled OFDM preamble and the calibration signal."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple
import numpy as np
from scipy import fft as sp_fft
from scipy.signal import windows
from typeguard import typechecked
from aquarange.exceptions import ParameterError
from aquarange.waveform.waveform_spec import WaveformSpec
from aquarange.waveform.zadoff_chu import make_zc_sequence


@dataclass(frozen=True, eq=False)
class Preamble:
    """Eight PN-signed OFDM symbols, each preceded by its cyclic prefix.

    `symbol_starts` holds the offset of each symbol slot, that is the first
    sample of its cyclic prefix.
    """

    samples: np.ndarray
    symbol_starts: Tuple[int, ...]
    total_len: int
    spec: WaveformSpec

    def __len__(self) -> int:
        """Number of samples in the whole preamble."""
        return self.total_len


@lru_cache(maxsize=16)
def _unscaled_symbol(spec: WaveformSpec) -> np.ndarray:
    bins = spec.pilot_bins
    if bins.size == 0:
        raise ParameterError(
            f"fft_size {spec.fft_size} leaves no active bins in "
            f"[{spec.band_low_hz}, {spec.band_high_hz}] Hz."
        )
    zc = make_zc_sequence(spec.zc_length, spec.zc_root)
    weights = windows.tukey(bins.size + 2, alpha=spec.edge_taper)[1:-1]
    spectrum = np.zeros(spec.fft_size // 2 + 1, dtype=np.complex128)
    spectrum[bins] = zc * weights
    return sp_fft.irfft(spectrum, n=spec.fft_size)


@lru_cache(maxsize=16)
def _base_symbol(spec: WaveformSpec) -> np.ndarray:
    symbol = _unscaled_symbol(spec)
    symbol = symbol / np.max(np.abs(symbol))
    symbol.setflags(write=False)
    return symbol


def base_symbol(spec: WaveformSpec) -> np.ndarray:
    """Returns the scaled OFDM symbol before PN signs and cyclic prefix."""
    return _base_symbol(spec)


@lru_cache(maxsize=16)
def _symbol_spectrum(spec: WaveformSpec) -> np.ndarray:
    spectrum = sp_fft.rfft(_base_symbol(spec))
    spectrum.setflags(write=False)
    return spectrum


def symbol_spectrum(spec: WaveformSpec) -> np.ndarray:
    """Returns X(k), the real FFT of the transmitted base symbol."""
    return _symbol_spectrum(spec)


@typechecked
def build_preamble(spec: WaveformSpec) -> Preamble:
    """Builds the preamble: eight copies of the base symbol times their PN signs."""
    symbol = _base_symbol(spec)
    slot = np.concatenate([symbol[spec.fft_size - spec.cp_len :], symbol])
    samples = np.concatenate([sign * slot for sign in spec.pn_signs])
    symbol_starts = tuple(i * spec.symbol_len for i in range(len(spec.pn_signs)))
    return Preamble(
        samples=samples,
        symbol_starts=symbol_starts,
        total_len=int(samples.size),
        spec=spec,
    )


@typechecked
def build_calibration_signal(spec: WaveformSpec) -> np.ndarray:
    """Returns the self-calibration signal, which reuses the preamble waveform."""
    return build_preamble(spec).samples.copy()
