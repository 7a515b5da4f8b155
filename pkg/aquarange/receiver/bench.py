"""Timing of the receive-side processing stages."""

from time import perf_counter
from typing import Dict, Tuple
import numpy as np
from tqdm.auto import trange
from aquarange.constants import BUFFER_SECONDS
from aquarange.receiver.auto_correlate import auto_correlate_score
from aquarange.receiver.channel_estimate import estimate_channel, extract_symbols
from aquarange.receiver.cross_correlate import cross_correlate
from aquarange.waveform import WaveformSpec, build_preamble


def benchmark_receiver(
    spec: WaveformSpec,
    runs: int = 100,
    buffer_seconds: float = BUFFER_SECONDS,
    seed: int = 0,
    verbose: bool = True,
) -> Dict[str, Tuple[float, float]]:
    """Returns mean and standard deviation, in milliseconds, of each stage.

    Every run processes one buffer holding a noisy preamble.
    """
    rng = np.random.default_rng(seed)
    preamble = build_preamble(spec)
    buffer_len = max(int(round(buffer_seconds * spec.sample_rate_hz)), preamble.total_len)
    timings: Dict[str, list] = {
        "cross_correlation": [],
        "auto_correlation": [],
        "channel_estimation": [],
    }
    for _ in trange(runs, desc="Benchmarking receiver", disable=not verbose, leave=False):
        buffer = 0.1 * rng.standard_normal(buffer_len + preamble.total_len)
        offset = int(rng.integers(0, buffer_len))
        buffer[offset : offset + preamble.total_len] += preamble.samples

        start = perf_counter()
        correlation = cross_correlate(buffer, preamble)
        timings["cross_correlation"].append(perf_counter() - start)

        coarse = correlation.peak_index or 0
        start = perf_counter()
        auto_correlate_score(buffer[coarse : coarse + preamble.total_len], spec)
        timings["auto_correlation"].append(perf_counter() - start)

        start = perf_counter()
        symbols = extract_symbols(buffer, coarse, spec, guard=spec.cp_len)
        for mic_id in ("bottom", "top"):
            estimate_channel(symbols, spec, mic_id, reference_tap=spec.cp_len)
        timings["channel_estimation"].append(perf_counter() - start)

    return {
        stage: (float(np.mean(values) * 1e3), float(np.std(values) * 1e3))
        for stage, values in timings.items()
    }
