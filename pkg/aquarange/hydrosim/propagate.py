"""Sample-accurate propagation through skewed clocks and fractional-delay taps."""

from typing import List, Optional, Sequence, Tuple
import numpy as np
from scipy.signal import fftconvolve, hilbert
from aquarange.audioclock import StreamClock
from aquarange.hydrosim.channel_profile import ChannelProfile, Tap

KERNEL_TAPS = 32
HALF_WIDTH = KERNEL_TAPS // 2


def windowed_sinc(offsets: np.ndarray) -> np.ndarray:
    """Blackman-windowed sinc kernel, zero outside +-16 samples."""
    x = np.asarray(offsets, dtype=np.float64)
    window = 0.42 + 0.5 * np.cos(np.pi * x / HALF_WIDTH) + 0.08 * np.cos(2 * np.pi * x / HALF_WIDTH)
    return np.where(np.abs(x) < HALF_WIDTH, np.sinc(x) * window, 0.0)


def fractional_delay_filter(
    delays: np.ndarray, gains: np.ndarray
) -> Tuple[int, np.ndarray]:
    """Returns (first index, FIR) summing one windowed sinc per delayed tap."""
    delays = np.asarray(delays, dtype=np.float64)
    gains = np.asarray(gains, dtype=np.float64)
    start = int(np.floor(delays.min())) - HALF_WIDTH + 1
    stop = int(np.ceil(delays.max())) + HALF_WIDTH
    indices = np.arange(start, stop + 1)
    fir = np.zeros(indices.size)
    for delay, gain in zip(delays, gains):
        low = int(np.floor(delay)) - HALF_WIDTH + 1 - start
        span = slice(low, low + KERNEL_TAPS)
        fir[span] += gain * windowed_sinc(indices[span] - delay)
    return start, fir


def resample(samples: np.ndarray, ratio: float) -> np.ndarray:
    """Returns q[j] = x(j / ratio), band-limited interpolation of `samples`."""
    samples = np.asarray(samples, dtype=np.float64)
    if ratio == 1.0:
        return samples.copy()
    count = int(np.floor((samples.size - 1) * ratio)) + 1
    positions = np.arange(count) / ratio
    base = np.floor(positions).astype(np.int64)
    indices = base[:, None] + np.arange(-HALF_WIDTH + 1, HALF_WIDTH + 1)[None, :]
    weights = windowed_sinc(positions[:, None] - indices)
    valid = (indices >= 0) & (indices < samples.size)
    values = np.where(valid, samples[np.clip(indices, 0, samples.size - 1)], 0.0)
    return np.sum(values * weights, axis=1)


def apply_carrier_offset(samples: np.ndarray, offset_hz: float, sample_rate_hz: float) -> np.ndarray:
    """Shifts every frequency of a real signal by `offset_hz`."""
    if offset_hz == 0.0:
        return samples
    phase = 2j * np.pi * offset_hz * np.arange(samples.size) / sample_rate_hz
    return np.real(hilbert(samples) * np.exp(phase))


def render_reception(
    tx_samples: np.ndarray,
    taps: Sequence[Tap],
    speaker_clock: StreamClock,
    mic_clock: StreamClock,
    speaker_index: int,
    carrier_offset_hz: float = 0.0,
) -> Tuple[int, np.ndarray]:
    """Returns (first mic index, samples) of one transmission at one microphone.

    The transmission is resampled from the speaker to the mic clock and then
    convolved with one fractional delay per tap, delays being measured from
    the emission of its first sample.
    """
    mic_origin = mic_clock.mic_index(speaker_clock.speaker_time(speaker_index))
    base = int(np.floor(mic_origin))
    fraction = mic_origin - base
    ratio = (1.0 - speaker_clock.alpha) / (1.0 - mic_clock.beta)
    resampled = resample(tx_samples, ratio)
    rate = mic_clock.nominal_fs / (1.0 - mic_clock.beta)
    delays = fraction + np.array([tap.delay_s for tap in taps]) * rate
    gains = np.array([tap.gain for tap in taps])
    start, fir = fractional_delay_filter(delays, gains)
    received = fftconvolve(resampled, fir)
    received = apply_carrier_offset(received, carrier_offset_hz, mic_clock.nominal_fs)
    return base + start, received


def noise_std_for_snr(signal_power: float, snr_db: Optional[float]) -> float:
    """Returns the noise standard deviation giving `snr_db` over `signal_power`."""
    if snr_db is None:
        return 0.0
    return float(np.sqrt(signal_power / 10 ** (snr_db / 10)))


def propagate(
    tx_stream: np.ndarray,
    profile: ChannelProfile,
    clocks: Tuple[StreamClock, StreamClock],
    snr_db: Optional[float],
    rng: np.random.Generator,
    source: int = 0,
    destination: int = 1,
    speaker_index: int = 0,
) -> List[np.ndarray]:
    """Returns the two microphone streams of `destination` receiving `tx_stream`.

    Each stream starts at mic index 0 and ends with the last received sample.
    The noise power is set relative to the mean received signal power over
    the duration of the transmission.
    """
    speaker_clock, mic_clock = clocks
    receptions = [
        render_reception(
            tx_stream,
            profile.link(source, destination, mic),
            speaker_clock,
            mic_clock,
            speaker_index,
        )
        for mic in (0, 1)
    ]
    length = max(start + samples.size for start, samples in receptions)
    streams = []
    for start, samples in receptions:
        stream = np.zeros(length)
        low = max(start, 0)
        stream[low : start + samples.size] = samples[low - start :]
        ratio = (1.0 - speaker_clock.alpha) / (1.0 - mic_clock.beta)
        power = float(np.sum(samples**2)) / (np.asarray(tx_stream).size * ratio)
        stream += noise_std_for_snr(power, snr_db) * rng.standard_normal(length)
        streams.append(stream)
    return streams
