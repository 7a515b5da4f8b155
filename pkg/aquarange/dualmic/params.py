"""Parameters of the dual-microphone direct-path search."""

from dataclasses import dataclass
from typing import Optional
import math
from aquarange.constants import (
    LAMBDA_MARGIN,
    MIC_SEPARATION_M,
    DEFAULT_SOUND_SPEED,
    SAMPLE_RATE_HZ,
)
from aquarange.exceptions import ParameterError


@dataclass(frozen=True)
class DualMicParams:
    """Threshold margin and maximum tap distance between the two microphones."""

    lambda_margin: float = LAMBDA_MARGIN
    mic_separation_m: float = MIC_SEPARATION_M
    sound_speed_mps: float = DEFAULT_SOUND_SPEED
    sample_rate_hz: int = SAMPLE_RATE_HZ
    max_tap_window: Optional[int] = None

    def __post_init__(self):
        if self.lambda_margin <= 0:
            raise ParameterError(f"lambda_margin must be positive, got {self.lambda_margin}.")
        if self.mic_separation_m <= 0:
            raise ParameterError(
                f"mic_separation_m must be positive, got {self.mic_separation_m}."
            )
        if self.sound_speed_mps <= 0:
            raise ParameterError(
                f"sound_speed_mps must be positive, got {self.sound_speed_mps}."
            )
        if self.max_tap_window is None:
            window = math.ceil(
                self.mic_separation_m * self.sample_rate_hz / self.sound_speed_mps - 1e-9
            )
            object.__setattr__(self, "max_tap_window", max(int(window), 1))
        elif self.max_tap_window < 1:
            raise ParameterError(
                f"max_tap_window must be at least 1, got {self.max_tap_window}."
            )
