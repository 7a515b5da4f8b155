"""Self-calibration of the speaker and mic index offset, and reply scheduling."""

from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional
import logging
from typeguard import typechecked
from aquarange.exceptions import MissedReplySlotError, ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CalibrationState:
    """Speaker index n1 of an own transmission and the mic index m1 it arrived at."""

    n1: int
    m1: float

    @property
    def offset(self) -> float:
        """Index offset n1 - m1."""
        return self.n1 - self.m1

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "offset": self.offset}


class ClockCalibrator:
    """Holds the latest calibration of one device."""

    def __init__(self):
        self._state: Optional[CalibrationState] = None
        self._updates = 0

    @property
    def state(self) -> Optional[CalibrationState]:
        return self._state

    @property
    def is_calibrated(self) -> bool:
        return self._state is not None

    @property
    def updates(self) -> int:
        """Number of calibrations stored so far."""
        return self._updates

    def self_calibrate(self, n1: int, m1: float) -> float:
        """Stores the calibration and returns the index offset n1 - m1."""
        self._state = CalibrationState(n1=int(n1), m1=float(m1))
        self._updates += 1
        logger.debug("Calibrated with offset %.3f samples.", self._state.offset)
        return self._state.offset


@typechecked
def schedule_reply(
    m2: float,
    cal: Optional[CalibrationState],
    t_reply0: float,
    nominal_fs: int,
    write_head: Optional[int] = None,
) -> int:
    """Returns the speaker index n2 = m2 + (n1 - m1) + fs t_reply0, rounded.

    Raises
    ------
    ParameterError
        If the device is not calibrated yet.
    MissedReplySlotError
        If n2 lies before the earliest writable speaker index.
    """
    if cal is None:
        raise ParameterError("Cannot schedule a reply before self-calibration.")
    n2 = int(round(m2 + cal.offset + nominal_fs * t_reply0))
    if write_head is not None and n2 < write_head:
        raise MissedReplySlotError(
            f"Reply slot {n2} has already been played out (write head at {write_head})."
        )
    return n2


@typechecked
def reply_error(
    alpha: float, beta: float, t_reply0: float, gap_samples: float, nominal_fs: int
) -> float:
    """Returns the predicted deviation of the realized reply interval from t_reply0."""
    return -alpha * t_reply0 + gap_samples * (beta - alpha) / nominal_fs
