"""Speaker stream kept full with zeros, written only ahead of the play head."""

import logging
import math
import numpy as np
from aquarange.audioclock.stream_clock import StreamClock
from aquarange.exceptions import SpeakerUnderrunError

logger = logging.getLogger(__name__)


class SpeakerStream:
    """Tracks the speaker write head of one device.

    Samples can only be scheduled at indices that have not been played yet
    and that lie after everything written before.
    """

    def __init__(self, clock: StreamClock, latency_samples: int = 0):
        self._clock = clock
        self._latency = int(latency_samples)
        self._write_head = 0

    @property
    def write_head(self) -> int:
        """First index after the last scheduled write."""
        return self._write_head

    @property
    def latency_samples(self) -> int:
        return self._latency

    def play_position(self, now: float) -> int:
        """Index of the speaker sample being played at time `now`."""
        return int(math.floor(self._clock.speaker_index(now)))

    def earliest_index(self, now: float) -> int:
        """First index that can still be written at time `now`."""
        return max(self._write_head, self.play_position(now) + self._latency)

    def write(self, n: int, samples: np.ndarray, now: float) -> int:
        """Schedules `samples` from speaker index `n` and returns the new write head."""
        earliest = self.earliest_index(now)
        if n < earliest:
            raise SpeakerUnderrunError(
                f"Cannot write at speaker index {n}: the earliest writable index is {earliest}."
            )
        self._write_head = int(n) + int(np.asarray(samples).size)
        logger.debug("Scheduled %d samples at speaker index %d.", np.asarray(samples).size, n)
        return self._write_head
