"""Events consumed and actions emitted by the protocol state machines."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union
from aquarange.ranging.ranging_result import RangingResult


@dataclass(frozen=True)
class Tick:
    """End of a processed microphone buffer, with the current speaker position."""

    mic_index: int
    speaker_index: int


@dataclass(frozen=True)
class PreambleDetected:
    """A validated preamble; `fine_index` is None when no direct path was found."""

    coarse_index: int
    fine_index: Optional[float]
    score: float
    speaker_index: int
    node_id: Optional[int] = None


@dataclass(frozen=True)
class Transmit:
    """Request to write a signal to the speaker stream at `speaker_index`."""

    speaker_index: int
    kind: str
    node_id: Optional[int] = None
    info: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ExchangeCompleted:
    result: RangingResult


@dataclass(frozen=True)
class ExchangeFailed:
    reason: str
    mic_index: float
    exchange: int
    peer_id: int = -1


@dataclass(frozen=True)
class DistanceOverheard:
    """Distance a diver derived from the leader's next query."""

    node_id: int
    distance_m: float
    t_10: float
    mic_index: float


@dataclass(frozen=True)
class RoundCompleted:
    """End of one leader round over the whole roster."""

    round_index: int
    distances: Dict[int, float]
    unreachable: Tuple[int, ...]


Event = Union[Tick, PreambleDetected]
Action = Union[
    Transmit, ExchangeCompleted, ExchangeFailed, DistanceOverheard, RoundCompleted
]
