"""Submodule simulating the underwater medium, devices and their clocks."""

from aquarange.hydrosim.scenario import (
    SimScenario,
    PROFILE_PRESETS,
    MIC_MODES,
    load_scenarios,
    expand_scenario,
)
from aquarange.hydrosim.geometry import Geometry, build_geometry
from aquarange.hydrosim.channel_profile import Tap, ChannelProfile, make_channel_profile
from aquarange.hydrosim.propagate import (
    windowed_sinc,
    fractional_delay_filter,
    resample,
    render_reception,
    propagate,
)
from aquarange.hydrosim.medium import Medium, Transmission
from aquarange.hydrosim.engine import ExchangeRecord, Session, run_sessions
from aquarange.hydrosim.trials import (
    TrialReport,
    RoundRobinReport,
    run_exchange,
    run_trials,
    run_track,
    run_round_robin,
    compare_mic_modes,
)

__all__ = [
    "SimScenario",
    "PROFILE_PRESETS",
    "MIC_MODES",
    "load_scenarios",
    "expand_scenario",
    "Geometry",
    "build_geometry",
    "Tap",
    "ChannelProfile",
    "make_channel_profile",
    "windowed_sinc",
    "fractional_delay_filter",
    "resample",
    "render_reception",
    "propagate",
    "Medium",
    "Transmission",
    "ExchangeRecord",
    "Session",
    "run_sessions",
    "TrialReport",
    "RoundRobinReport",
    "run_exchange",
    "run_trials",
    "run_track",
    "run_round_robin",
    "compare_mic_modes",
]
