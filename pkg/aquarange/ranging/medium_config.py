"""Sound speed configuration of the water column."""

from dataclasses import dataclass, asdict
from typing import Any, Dict
from typeguard import typechecked
from aquarange.constants import DEFAULT_SOUND_SPEED
from aquarange.exceptions import ParameterError

SPEED_MODELS = ("fixed", "wilson")

VALIDITY_RANGES = {
    "temperature_c": (-2.0, 35.0),
    "salinity_psu": (0.0, 45.0),
    "depth_m": (0.0, 1000.0),
}


@typechecked
def wilson_speed(temperature_c: float, salinity_psu: float, depth_m: float) -> float:
    """Returns the speed of sound in water from Wilson's simplified equation.

    Parameters
    ----------
    temperature_c : float
        Temperature in degrees Celsius, within [-2, 35].
    salinity_psu : float
        Salinity in PSU, within [0, 45].
    depth_m : float
        Depth in meters, within [0, 1000].
    """
    values = {
        "temperature_c": temperature_c,
        "salinity_psu": salinity_psu,
        "depth_m": depth_m,
    }
    for name, value in values.items():
        low, high = VALIDITY_RANGES[name]
        if not low <= value <= high:
            raise ParameterError(f"{name} must lie in [{low}, {high}], got {value}.")
    t = temperature_c
    return (
        1449.0
        + 4.6 * t
        - 0.055 * t**2
        + 0.0003 * t**3
        + 1.39 * (salinity_psu - 35.0)
        + 0.017 * depth_m
    )


@dataclass(frozen=True)
class MediumConfig:
    """Water properties, or a fixed speed override."""

    model: str = "fixed"
    fixed_speed_mps: float = DEFAULT_SOUND_SPEED
    temperature_c: float = 10.0
    salinity_psu: float = 35.0
    depth_m: float = 1.0

    def __post_init__(self):
        if self.model not in SPEED_MODELS:
            raise ParameterError(
                f"Speed model must be one of {SPEED_MODELS}, got '{self.model}'."
            )
        if not 1400.0 <= self.sound_speed <= 1600.0:
            raise ParameterError(
                f"Sound speed {self.sound_speed} m/s lies outside [1400, 1600] m/s."
            )

    @property
    def sound_speed(self) -> float:
        if self.model == "wilson":
            return wilson_speed(
                float(self.temperature_c), float(self.salinity_psu), float(self.depth_m)
            )
        return float(self.fixed_speed_mps)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MediumConfig":
        unknown = sorted(set(data) - set(cls.__dataclass_fields__))
        if unknown:
            raise ParameterError(f"Unknown medium fields: {', '.join(unknown)}.")
        return cls(**data)
