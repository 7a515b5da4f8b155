"""Simulation scenarios and their JSON files."""

from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, List, Optional, Tuple
import logging
import compress_json
from aquarange.constants import (
    BUFFER_SECONDS,
    EXCHANGE_PERIOD_S,
    ID_TONE_SECONDS,
    LAMBDA_MARGIN,
    MIC_SEPARATION_M,
    REPLY_INTERVAL_S,
    SPEAKER_LATENCY_S,
)
from aquarange.exceptions import ParameterError, ScenarioError
from aquarange.ranging import MediumConfig
from aquarange.waveform import WaveformSpec

logger = logging.getLogger(__name__)

PROFILE_PRESETS = ("clean", "case_air", "case_underwater_dense", "shallow_severe")
MIC_MODES = ("dual", "bottom", "top")
ORIENTATIONS = ("vertical", "random", "axial")
PREAMBLES = ("short", "long")
LONG_REPLY_INTERVAL_S = 1.5
LONG_EXCHANGE_PERIOD_S = 2.5


@dataclass(frozen=True)
class SimScenario:
    """Geometry, channel, noise and clock settings of a simulated deployment.

    Device 0 is the sender, or the leader when `diver_distances_m` is set.
    A `track` of (time_s, distance_m) waypoints moves device 1 along the x axis.
    Positions, orientations and `skews_ppm` describe physical phones; with
    `swap_roles` the phone listed second sends and the first one replies.
    """

    name: str = "scenario"
    distance_m: float = 10.0
    diver_distances_m: Tuple[float, ...] = ()
    track: Tuple[Tuple[float, float], ...] = ()
    profile: str = "case_underwater_dense"
    snr_db: Optional[float] = None
    snr_reference_m: Optional[float] = None
    seed: int = 0
    preamble: str = "short"
    t_reply0: Optional[float] = None
    exchange_period_s: Optional[float] = None
    exchanges_per_session: int = 20
    skews_ppm: Tuple[Tuple[float, float], ...] = ()
    buffer_offset_s: float = 0.05
    buffer_seconds: float = BUFFER_SECONDS
    speaker_latency_s: float = SPEAKER_LATENCY_S
    mic_mode: str = "dual"
    orientation: str = "random"
    depth_m: float = 1.0
    mic_separation_m: float = MIC_SEPARATION_M
    speaker_offset_m: float = 0.01
    lambda_margin: float = LAMBDA_MARGIN
    medium: MediumConfig = field(default_factory=MediumConfig)
    spike_rate: float = 0.0
    spike_amplitude: float = 1.0
    carrier_offset_hz: float = 0.0
    occlusion_db: float = 0.0
    occlusion_rate: float = 0.0
    delta_error_s: float = 0.0
    overhear_reference: str = "own_mic"
    swap_roles: bool = False

    def __post_init__(self):
        choices = {
            "profile": PROFILE_PRESETS,
            "mic_mode": MIC_MODES,
            "orientation": ORIENTATIONS,
            "preamble": PREAMBLES,
            "overhear_reference": ("own_mic", "emission"),
        }
        for name, options in choices.items():
            if getattr(self, name) not in options:
                raise ScenarioError(
                    f"{name} must be one of {options}, got '{getattr(self, name)}'."
                )
        if self.distance_m <= 0 or any(d <= 0 for d in self.diver_distances_m):
            raise ScenarioError("Distances must be positive.")
        if self.swap_roles and self.diver_distances_m:
            raise ScenarioError("swap_roles applies to sender and replier pairs only.")
        if len(self.diver_distances_m) > 15:
            raise ScenarioError("At most 15 divers can share the ID tone table.")
        if self.exchanges_per_session <= 0:
            raise ScenarioError(
                f"exchanges_per_session must be positive, got {self.exchanges_per_session}."
            )
        if len(self.skews_ppm) > self.device_count:
            raise ScenarioError(
                f"skews_ppm lists {len(self.skews_ppm)} devices, "
                f"the scenario has {self.device_count}."
            )
        for alpha, beta in self.skews_ppm:
            if abs(alpha) > 1000 or abs(beta) > 1000:
                raise ScenarioError("skews_ppm entries must lie within +-1000 ppm.")
        if self.track and any(
            later[0] <= earlier[0] for earlier, later in zip(self.track, self.track[1:])
        ):
            raise ScenarioError("track waypoints must have strictly increasing times.")
        if not 0.0 <= self.occlusion_rate <= 1.0 or not 0.0 <= self.spike_rate <= 1.0:
            raise ScenarioError("occlusion_rate and spike_rate must lie in [0, 1].")
        slot = self.spec.duration_s + self.buffer_seconds + self.speaker_latency_s
        if self.is_group:
            slot += ID_TONE_SECONDS
        if self.reply_interval_s < slot:
            raise ScenarioError(
                f"t_reply0 of {self.reply_interval_s} s is shorter than the "
                f"{slot:.3f} s needed to detect a preamble and schedule the reply."
            )
        if not self.is_group and self.period_s < self.reply_interval_s + self.spec.duration_s + 0.1:
            raise ScenarioError(
                f"exchange_period_s of {self.period_s} s leaves no room for the reply."
            )

    @property
    def spec(self) -> WaveformSpec:
        return WaveformSpec.from_preset(self.preamble)

    @property
    def reply_interval_s(self) -> float:
        if self.t_reply0 is not None:
            return float(self.t_reply0)
        return LONG_REPLY_INTERVAL_S if self.preamble == "long" else REPLY_INTERVAL_S

    @property
    def period_s(self) -> float:
        if self.exchange_period_s is not None:
            return float(self.exchange_period_s)
        return LONG_EXCHANGE_PERIOD_S if self.preamble == "long" else EXCHANGE_PERIOD_S

    @property
    def is_group(self) -> bool:
        return len(self.diver_distances_m) > 0

    @property
    def device_count(self) -> int:
        return 1 + len(self.diver_distances_m) if self.is_group else 2

    @property
    def reference_distance_m(self) -> float:
        """Distance at which `snr_db` holds; the noise power is fixed from it."""
        if self.snr_reference_m is not None:
            return float(self.snr_reference_m)
        if self.is_group:
            return float(max(self.diver_distances_m))
        if self.track:
            return float(self.track[0][1])
        return float(self.distance_m)

    def phone(self, device: int) -> int:
        """Physical phone playing the role of `device`."""
        return 1 - device if self.swap_roles else device

    def skew(self, device: int) -> Tuple[float, float]:
        """Returns (alpha, beta) of a device as fractions."""
        phone = self.phone(device)
        if phone < len(self.skews_ppm):
            alpha, beta = self.skews_ppm[phone]
            return alpha * 1e-6, beta * 1e-6
        return 0.0, 0.0

    def with_distance(self, distance_m: float) -> "SimScenario":
        """Returns a copy placing the replier at `distance_m`."""
        return replace(self, name=f"{self.name}_{distance_m:g}m", distance_m=float(distance_m))

    def to_dict(self) -> Dict[str, Any]:
        """Returns the scenario as JSON, tuples turned into lists."""
        data: Dict[str, Any] = {}
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, MediumConfig):
                value = value.to_dict()
            elif isinstance(value, tuple):
                value = [list(entry) if isinstance(entry, tuple) else entry for entry in value]
            data[item.name] = value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimScenario":
        """Builds a scenario from a dictionary, naming any invalid field."""
        known = {item.name for item in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ScenarioError(f"Unknown scenario fields: {', '.join(unknown)}.")
        values = dict(data)
        try:
            if "medium" in values:
                values["medium"] = MediumConfig.from_dict(values["medium"])
            if "diver_distances_m" in values:
                values["diver_distances_m"] = tuple(float(d) for d in values["diver_distances_m"])
            if "track" in values:
                values["track"] = tuple((float(t), float(d)) for t, d in values["track"])
            if "skews_ppm" in values:
                values["skews_ppm"] = tuple(
                    (float(alpha), float(beta)) for alpha, beta in values["skews_ppm"]
                )
        except (TypeError, ValueError) as error:
            raise ScenarioError(f"Malformed scenario field: {error}") from error
        for name, expected in (
            ("distance_m", float),
            ("seed", int),
            ("exchanges_per_session", int),
        ):
            if name in values and not isinstance(values[name], (int, float)):
                raise ScenarioError(
                    f"{name} must be a number, got {type(values[name]).__name__}."
                )
            if name in values:
                values[name] = expected(values[name])
        try:
            return cls(**values)
        except ScenarioError:
            raise
        except (ParameterError, TypeError) as error:
            raise ScenarioError(str(error)) from error


def expand_scenario(data: Dict[str, Any]) -> List[SimScenario]:
    """Builds the scenarios of one entry, one per distance of `distances_m`."""
    values = dict(data)
    distances = values.pop("distances_m", None)
    if distances is None:
        return [SimScenario.from_dict(values)]
    if not isinstance(distances, list) or not distances:
        raise ScenarioError("distances_m must be a non-empty list.")
    base = SimScenario.from_dict(values)
    return [base.with_distance(float(distance)) for distance in distances]


def load_scenarios(path: str) -> List[SimScenario]:
    """Loads the scenarios of a JSON file holding one entry or a list of entries."""
    try:
        data = compress_json.load(path)
    except FileNotFoundError as error:
        raise ScenarioError(f"Scenario file {path} does not exist.") from error
    except ValueError as error:
        raise ScenarioError(f"Scenario file {path} is not valid JSON: {error}") from error
    entries = data if isinstance(data, list) else [data]
    scenarios = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise ScenarioError(f"Scenario entries must be objects, got {type(entry).__name__}.")
        scenarios.extend(expand_scenario(entry))
    logger.info("Loaded %d scenarios from %s.", len(scenarios), path)
    return scenarios
