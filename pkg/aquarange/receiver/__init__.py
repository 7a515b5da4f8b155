"""Submodule detecting preambles and estimating channels."""

from aquarange.receiver.cross_correlate import CorrelationResult, cross_correlate
from aquarange.receiver.auto_correlate import auto_correlate_score
from aquarange.receiver.channel_estimate import (
    ChannelEstimate,
    estimate_channel,
    extract_symbols,
    timing_reference,
)
from aquarange.receiver.detector import (
    DetectionResult,
    PreambleDetector,
    detect_preamble,
)
from aquarange.receiver.bench import benchmark_receiver

__all__ = [
    "CorrelationResult",
    "cross_correlate",
    "auto_correlate_score",
    "ChannelEstimate",
    "estimate_channel",
    "timing_reference",
    "extract_symbols",
    "DetectionResult",
    "PreambleDetector",
    "detect_preamble",
    "benchmark_receiver",
]
