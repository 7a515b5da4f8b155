"""Outcome of one two-way ranging exchange and its CSV log."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable
import os
import pandas as pd


@dataclass(frozen=True)
class RangingResult:
    """Distance measured by the sender of one exchange."""

    t_send: float
    t_reply0: float
    delta1: float
    delta2: float
    tof: float
    distance_m: float
    sound_speed: float
    timestamp_s: float = 0.0
    exchange: int = 0
    peer_id: int = -1
    fine_indices: Dict[str, float] = field(default_factory=dict)
    quality: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Returns a flat row for the CSV log."""
        row: Dict[str, Any] = {
            "timestamp_s": self.timestamp_s,
            "exchange": self.exchange,
            "peer_id": self.peer_id,
            "distance_m": self.distance_m,
            "tof_s": self.tof,
            "t_send_s": self.t_send,
            "t_reply0_s": self.t_reply0,
            "delta1_s": self.delta1,
            "delta2_s": self.delta2,
            "sound_speed_mps": self.sound_speed,
        }
        row.update({f"{name}_index": value for name, value in self.fine_indices.items()})
        row.update({f"{name}_score": value for name, value in self.quality.items()})
        return row


def append_results_csv(path: str, results: Iterable[RangingResult]) -> pd.DataFrame:
    """Appends one row per result to `path`, writing the header on creation."""
    frame = pd.DataFrame([result.to_dict() for result in results])
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    exists = os.path.exists(path)
    frame.to_csv(path, mode="a" if exists else "w", header=not exists, index=False)
    return frame
