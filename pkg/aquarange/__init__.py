"""Smartphone underwater acoustic ranging: waveform, receiver, protocol and simulator."""

from aquarange.__version__ import __version__
from aquarange.waveform import WaveformSpec, build_preamble
from aquarange.receiver import PreambleDetector, estimate_channel
from aquarange.dualmic import DualMicParams, find_direct_path
from aquarange.ranging import compute_tof, RangingResult
from aquarange.hydrosim import SimScenario, load_scenarios, run_exchange, run_trials

__all__ = [
    "__version__",
    "WaveformSpec",
    "build_preamble",
    "PreambleDetector",
    "estimate_channel",
    "DualMicParams",
    "find_direct_path",
    "compute_tof",
    "RangingResult",
    "SimScenario",
    "load_scenarios",
    "run_exchange",
    "run_trials",
]
