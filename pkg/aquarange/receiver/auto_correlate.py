"""Consistency score across the eight PN-corrected preamble symbols."""

import numpy as np
from scipy import fft as sp_fft
from aquarange.waveform import WaveformSpec


def symbol_spectra(segment: np.ndarray, spec: WaveformSpec) -> np.ndarray:
    """Returns the PN-corrected in-band spectra of the eight CP-stripped symbols."""
    samples = np.asarray(segment, dtype=np.float64)
    if samples.size < spec.total_len:
        samples = np.pad(samples, (0, spec.total_len - samples.size))
    starts = np.arange(len(spec.pn_signs)) * spec.symbol_len + spec.cp_len
    blocks = np.stack([samples[start : start + spec.fft_size] for start in starts])
    blocks *= np.asarray(spec.pn_signs, dtype=np.float64)[:, None]
    return sp_fft.rfft(blocks, axis=1)[:, spec.pilot_bins]


def auto_correlate_score(candidate_segment: np.ndarray, spec: WaveformSpec) -> float:
    """Returns the mean normalized correlation over all pairs of symbols.

    The score lies in [-1, 1]; a genuine preamble scores close to 1 and
    uncorrelated noise close to 0.
    """
    spectra = symbol_spectra(candidate_segment, spec)
    norms = np.linalg.norm(spectra, axis=1)
    units = np.zeros_like(spectra)
    nonzero = norms > 0
    units[nonzero] = spectra[nonzero] / norms[nonzero, None]
    gram = np.real(units @ units.conj().T)
    upper = np.triu_indices(len(spec.pn_signs), k=1)
    return float(np.mean(gram[upper]))
