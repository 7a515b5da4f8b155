"""Submodule implementing the two-way ranging protocol."""

from aquarange.ranging.medium_config import MediumConfig, wilson_speed
from aquarange.ranging.time_of_flight import compute_tof, delta_sensitivity
from aquarange.ranging.ranging_result import RangingResult, append_results_csv
from aquarange.ranging.events import (
    Tick,
    PreambleDetected,
    Transmit,
    ExchangeCompleted,
    ExchangeFailed,
    DistanceOverheard,
    RoundCompleted,
)
from aquarange.ranging.protocol import (
    ProtocolConfig,
    DeviceState,
    SenderState,
    ReplierState,
    sender_step,
    replier_step,
)

__all__ = [
    "MediumConfig",
    "wilson_speed",
    "compute_tof",
    "delta_sensitivity",
    "RangingResult",
    "append_results_csv",
    "Tick",
    "PreambleDetected",
    "Transmit",
    "ExchangeCompleted",
    "ExchangeFailed",
    "DistanceOverheard",
    "RoundCompleted",
    "ProtocolConfig",
    "DeviceState",
    "SenderState",
    "ReplierState",
    "sender_step",
    "replier_step",
]
