"""A simulated phone: detector, dual-microphone analysis and protocol role."""

from typing import List, Optional
import logging
import numpy as np
from aquarange.audioclock import SpeakerStream, StreamClock
from aquarange.dualmic import (
    DualMicParams,
    candidate_table,
    find_direct_pair,
    find_first_peak,
    refine_arrival,
    refine_peak,
)
from aquarange.hydrosim.geometry import BOTTOM, TOP
from aquarange.hydrosim.medium import Medium
from aquarange.multinode import decode_id
from aquarange.ranging import DeviceState, PreambleDetected
from aquarange.receiver import (
    DetectionResult,
    PreambleDetector,
    estimate_channel,
    extract_symbols,
)
from aquarange.utils import RecordLog
from aquarange.waveform import WaveformSpec

logger = logging.getLogger(__name__)


class SimDevice:
    """One device taking part in a simulated session.

    Coarse detection runs on one microphone; each detection is then
    estimated on both microphones at the same coarse index.
    """

    def __init__(
        self,
        index: int,
        state: DeviceState,
        clock: StreamClock,
        spec: WaveformSpec,
        params: DualMicParams,
        mic_mode: str,
        latency_samples: int,
        decode_ids: bool,
        records: RecordLog,
    ):
        self.index = index
        self.state = state
        self.clock = clock
        self.spec = spec
        self.params = params
        self.mic_mode = mic_mode
        self.decode_ids = decode_ids
        self.speaker = SpeakerStream(clock, latency_samples)
        self.detector = PreambleDetector(spec)
        self.pending: List[DetectionResult] = []
        self._records = records

    @property
    def detection_mic(self) -> int:
        return TOP if self.mic_mode == "top" else BOTTOM

    def required_end(self, detection: DetectionResult) -> int:
        """Mic index after which a detection, and its ID tone, can be analysed."""
        end = detection.coarse_index + self.spec.total_len
        if self.decode_ids:
            end += self.spec.id_tone_len
        return end

    def listen(self, medium: Medium, start: int, length: int):
        """Feeds one buffer to the detector if anything may arrive in it."""
        mic = self.detection_mic
        history = self.detector.history_len
        if not medium.has_arrival(self.index, start - history, start + length):
            if self.detector.next_index != start + length:
                self.detector.reset(start + length)
            return
        if self.detector.next_index != start:
            self.detector.reset(start)
            self.detector.prime(medium.render(self.index, mic, start - history, history))
        self.pending.extend(self.detector.feed(medium.render(self.index, mic, start, length)))

    def _fine_index(self, detection: DetectionResult, medium: Medium) -> Optional[float]:
        spec = self.spec
        guard = spec.cp_len
        estimates = []
        for mic, name in ((BOTTOM, "bottom"), (TOP, "top")):
            stream = medium.render(self.index, mic, detection.coarse_index, spec.total_len)
            symbols = extract_symbols(stream, 0, spec, guard=guard)
            estimates.append(estimate_channel(symbols, spec, name, reference_tap=guard))
        bottom, top = estimates
        if self.mic_mode == "dual":
            pair = find_direct_pair(bottom, top, self.params)
            self._records.add(
                "candidates",
                device=self.index,
                coarse_index=detection.coarse_index,
                pairs=len(candidate_table(bottom, top, self.params)),
                bottom_peak=bottom.to_dict()["peak_tap"],
                top_peak=top.to_dict()["peak_tap"],
            )
            if pair is None:
                return None
            tau = (refine_peak(bottom.taps, pair[0]) + refine_peak(top.taps, pair[1])) / 2.0
        else:
            estimate = bottom if self.mic_mode == "bottom" else top
            first = find_first_peak(estimate, self.params)
            if first is None:
                return None
            tau = refine_peak(estimate.taps, first)
        return refine_arrival(detection.coarse_index, tau, reference_tap=guard)

    def analyze(self, detection: DetectionResult, medium: Medium, now: float) -> PreambleDetected:
        """Turns a detection into a protocol event with its fine index and ID."""
        fine = self._fine_index(detection, medium)
        node_id = None
        if self.decode_ids:
            tone_start = int(round(fine)) if fine is not None else detection.coarse_index
            window = medium.render(
                self.index,
                BOTTOM,
                tone_start + self.spec.total_len,
                self.spec.id_tone_len,
            )
            node_id = decode_id(window, self.spec)
        self._records.add(
            "detection",
            device=self.index,
            time_s=now,
            fine_index=np.nan if fine is None else fine,
            node_id=node_id,
            **detection.to_dict(),
        )
        return PreambleDetected(
            coarse_index=detection.coarse_index,
            fine_index=fine,
            score=detection.autocorr_score,
            speaker_index=self.speaker.play_position(now),
            node_id=node_id,
        )

    def ready(self, buffer_end: int) -> List[DetectionResult]:
        """Pops the pending detections whose samples are all captured."""
        ready = [d for d in self.pending if self.required_end(d) <= buffer_end]
        self.pending = [d for d in self.pending if self.required_end(d) > buffer_end]
        return ready
