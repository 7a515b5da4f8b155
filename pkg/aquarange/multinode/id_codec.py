"""Decoding of the device-ID tone that follows a preamble."""

from typing import Optional
import logging
import numpy as np
from scipy import fft as sp_fft
from scipy.signal import windows
from aquarange.constants import ID_SNR_FLOOR_DB
from aquarange.waveform import WaveformSpec

logger = logging.getLogger(__name__)

ZERO_PADDING = 4


def tone_snrs_db(window: np.ndarray, spec: WaveformSpec) -> np.ndarray:
    """Returns the SNR, in dB, of each tone of the ID table within `window`.

    Tone power is the spectral peak within half a tone spacing of the tone;
    noise is the median power over the whole tone table span.
    """
    samples = np.asarray(window, dtype=np.float64)[: spec.id_tone_len]
    if samples.size < spec.id_tone_len:
        samples = np.pad(samples, (0, spec.id_tone_len - samples.size))
    size = ZERO_PADDING * samples.size
    power = np.abs(sp_fft.rfft(samples * windows.hann(samples.size), n=size)) ** 2
    frequencies = sp_fft.rfftfreq(size, d=1.0 / spec.sample_rate_hz)
    table = np.asarray(spec.id_tone_table)
    half_spacing = float(np.min(np.diff(table))) / 2.0 if table.size > 1 else 17.5
    span = (frequencies >= table[0] - 2 * half_spacing) & (
        frequencies <= table[-1] + 2 * half_spacing
    )
    noise = float(np.median(power[span]))
    tone_power = np.array(
        [power[np.abs(frequencies - tone) <= half_spacing].max() for tone in table]
    )
    with np.errstate(divide="ignore"):
        if noise > 0.0:
            return 10.0 * np.log10(tone_power / noise)
        return np.where(tone_power > 0.0, np.inf, -np.inf)


def decode_id(
    window: np.ndarray, spec: WaveformSpec, snr_floor_db: float = ID_SNR_FLOOR_DB
) -> Optional[int]:
    """Returns the ID whose tone has the highest SNR, or None below the floor."""
    snrs = tone_snrs_db(window, spec)
    best = int(np.argmax(snrs))
    if not snrs[best] >= snr_floor_db:
        logger.debug("No ID decoded: best tone SNR %.1f dB.", snrs[best])
        return None
    return best
