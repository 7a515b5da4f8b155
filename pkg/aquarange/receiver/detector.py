"""Streaming two-stage preamble detector."""

from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional
import logging
import numpy as np
from aquarange.constants import AUTOCORR_THRESHOLD
from aquarange.exceptions import ParameterError
from aquarange.receiver.auto_correlate import auto_correlate_score
from aquarange.receiver.cross_correlate import normalized_correlation
from aquarange.waveform import WaveformSpec, build_preamble

logger = logging.getLogger(__name__)

MAXIMUM_CANDIDATES = 3


@dataclass(frozen=True)
class DetectionResult:
    """A preamble accepted by both detection stages."""

    coarse_index: int
    xcorr_peak: float
    autocorr_score: float

    def to_dict(self) -> Dict[str, Any]:
        """Returns the detection as a JSON-ready dictionary."""
        return asdict(self)


class PreambleDetector:
    """Detects preambles in a microphone stream fed buffer by buffer.

    Each candidate start index is examined exactly once: a buffer owns the
    starts whose full preamble ends inside the data seen so far and that were
    not owned by an earlier buffer. The last `total_len - 1` samples are kept
    so that a preamble straddling two buffers is found in the later one.
    """

    def __init__(
        self,
        spec: WaveformSpec,
        threshold: float = AUTOCORR_THRESHOLD,
        start_index: int = 0,
    ):
        if not -1.0 <= threshold <= 1.0:
            raise ParameterError(f"threshold must lie in [-1, 1], got {threshold}.")
        self._spec = spec
        self._template = build_preamble(spec).samples
        self._threshold = threshold
        self.reset(start_index)

    @property
    def spec(self) -> WaveformSpec:
        return self._spec

    @property
    def next_index(self) -> int:
        """Absolute index of the next sample expected by `feed`."""
        return self._next_index

    @property
    def history_len(self) -> int:
        return self._template.size - 1

    def reset(self, next_index: int):
        """Drops all history; the next fed sample has index `next_index`."""
        self._next_index = int(next_index)
        self._history = np.zeros(0)
        self._search_from = int(next_index)
        self._lockout_until = int(next_index)
        self._backlog: List[DetectionResult] = []

    @property
    def backlog(self) -> List[DetectionResult]:
        """Detections found but not yet handed out by `next_detection`."""
        return list(self._backlog)

    def next_detection(self, samples: np.ndarray) -> Optional[DetectionResult]:
        """Feeds one buffer and returns the earliest detection not yet handed out.

        Later detections completed by the same buffer are kept and returned,
        in order, by the following calls.
        """
        self._backlog.extend(self.feed(samples))
        if not self._backlog:
            return None
        return self._backlog.pop(0)

    def prime(self, history: np.ndarray):
        """Loads the samples preceding `next_index` without searching them alone."""
        samples = np.asarray(history, dtype=np.float64)[-self.history_len :]
        self._history = samples.copy()
        self._search_from = min(self._search_from, self._next_index - samples.size)
        self._lockout_until = min(self._lockout_until, self._search_from)

    def feed(self, samples: np.ndarray) -> List[DetectionResult]:
        """Consumes one buffer and returns the preambles it completes."""
        window = np.concatenate([self._history, np.asarray(samples, dtype=np.float64)])
        window_start = self._next_index - self._history.size
        self._next_index += int(np.asarray(samples).size)
        self._history = window[-self.history_len :].copy()
        if window.size < self._template.size:
            return []
        series = normalized_correlation(window, self._template)
        magnitude = np.abs(series)
        owned = np.zeros(magnitude.size, dtype=bool)
        first = max(self._search_from, self._lockout_until) - window_start
        owned[max(first, 0) :] = True
        self._search_from = window_start + magnitude.size
        detections = []
        rejected = 0
        while rejected < MAXIMUM_CANDIDATES:
            candidates = np.where(owned, magnitude, 0.0)
            lag = int(np.argmax(candidates))
            peak = float(candidates[lag])
            if peak <= 0.0:
                break
            segment = window[lag : lag + self._template.size]
            score = auto_correlate_score(segment, self._spec)
            if score >= self._threshold:
                detection = DetectionResult(
                    coarse_index=window_start + lag,
                    xcorr_peak=peak,
                    autocorr_score=score,
                )
                logger.debug("Preamble detected: %s", detection)
                detections.append(detection)
                self._lockout_until = detection.coarse_index + self._template.size
                owned[: lag + self._template.size] = False
            else:
                rejected += 1
                low = max(lag - self._spec.symbol_len, 0)
                owned[low : lag + self._spec.symbol_len] = False
        return detections


def detect_preamble(
    stream: np.ndarray, spec: WaveformSpec, state: PreambleDetector
) -> Optional[DetectionResult]:
    """Feeds one buffer to `state` and returns the earliest pending detection.

    A buffer completing several preambles yields them over successive calls,
    so no detection is lost.
    """
    if state.spec != spec:
        raise ParameterError("The detector state was built for a different waveform.")
    return state.next_detection(stream)
