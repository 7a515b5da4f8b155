"""Linear maps between stream sample indices and device-independent time."""

from dataclasses import dataclass, asdict
from typing import Any, Dict, Union
import numpy as np
from aquarange.constants import MAX_CLOCK_SKEW, SAMPLE_RATE_HZ
from aquarange.exceptions import ParameterError

Index = Union[int, float, np.ndarray]


@dataclass(frozen=True)
class StreamClock:
    """Skews and initial timestamps of a device's speaker and mic streams.

    The speaker runs at nominal_fs / (1 - alpha) and the microphone at
    nominal_fs / (1 - beta).
    """

    alpha: float = 0.0
    beta: float = 0.0
    t_s0: float = 0.0
    t_m0: float = 0.0
    nominal_fs: int = SAMPLE_RATE_HZ

    def __post_init__(self):
        for name in ("alpha", "beta"):
            if abs(getattr(self, name)) > MAX_CLOCK_SKEW:
                raise ParameterError(
                    f"|{name}| must not exceed {MAX_CLOCK_SKEW}, got {getattr(self, name)}."
                )
        if self.nominal_fs <= 0:
            raise ParameterError(f"nominal_fs must be positive, got {self.nominal_fs}.")

    @property
    def speaker_rate(self) -> float:
        return self.nominal_fs / (1.0 - self.alpha)

    @property
    def mic_rate(self) -> float:
        return self.nominal_fs / (1.0 - self.beta)

    def speaker_time(self, n: Index) -> Index:
        """Time at which speaker sample `n` is played."""
        return n * (1.0 - self.alpha) / self.nominal_fs + self.t_s0

    def mic_time(self, m: Index) -> Index:
        """Time at which mic sample `m` is captured."""
        return m * (1.0 - self.beta) / self.nominal_fs + self.t_m0

    def speaker_index(self, t: Index) -> Index:
        """Real-valued speaker index played at time `t`."""
        return (t - self.t_s0) * self.nominal_fs / (1.0 - self.alpha)

    def mic_index(self, t: Index) -> Index:
        """Real-valued mic index captured at time `t`."""
        return (t - self.t_m0) * self.nominal_fs / (1.0 - self.beta)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def speaker_time(n: Index, clock: StreamClock) -> Index:
    """Returns t_s(n) = n (1 - alpha) / fs + t_s0."""
    return clock.speaker_time(n)


def mic_time(m: Index, clock: StreamClock) -> Index:
    """Returns t_m(m) = m (1 - beta) / fs + t_m0."""
    return clock.mic_time(m)
