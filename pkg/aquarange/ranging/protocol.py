"""Event-driven state machines of the two-way ranging protocol."""

from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional
import logging
from aquarange.audioclock import ClockCalibrator, schedule_reply
from aquarange.constants import (
    SAMPLE_RATE_HZ,
    REPLY_INTERVAL_S,
    EXCHANGE_PERIOD_S,
    REPLY_TIMEOUT_FACTOR,
    CALIBRATION_RETRY_S,
    DEFAULT_SOUND_SPEED,
)
from aquarange.exceptions import (
    InconsistentExchangeError,
    MissedReplySlotError,
    ParameterError,
)
from aquarange.ranging.events import (
    Action,
    Event,
    ExchangeCompleted,
    ExchangeFailed,
    PreambleDetected,
    Tick,
    Transmit,
)
from aquarange.ranging.ranging_result import RangingResult
from aquarange.ranging.time_of_flight import compute_tof

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProtocolConfig:
    """Timing constants of one device taking part in the protocol.

    `own_delta_s` and `peer_delta_s` are the speaker-to-microphone delays of
    this device and of its peer.
    """

    sample_rate_hz: int = SAMPLE_RATE_HZ
    preamble_len: int = 13936
    t_reply0: float = REPLY_INTERVAL_S
    exchange_period_s: float = EXCHANGE_PERIOD_S
    timeout_factor: float = REPLY_TIMEOUT_FACTOR
    calibration_retry_s: float = CALIBRATION_RETRY_S
    latency_samples: int = 441
    own_delta_s: float = 0.0
    peer_delta_s: float = 0.0
    sound_speed: float = DEFAULT_SOUND_SPEED
    start_delay_s: float = 0.0
    first_query_s: float = 0.0
    own_tolerance_s: float = 0.05
    detection_slack_s: float = 1.0

    def __post_init__(self):
        if self.t_reply0 <= 0:
            raise ParameterError(f"t_reply0 must be positive, got {self.t_reply0}.")
        if self.exchange_period_s <= 0:
            raise ParameterError(
                f"exchange_period_s must be positive, got {self.exchange_period_s}."
            )
        if self.timeout_factor <= 1:
            raise ParameterError(
                f"timeout_factor must exceed 1, got {self.timeout_factor}."
            )

    def samples(self, seconds: float) -> float:
        return seconds * self.sample_rate_hz

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class DeviceState:
    """Self-calibration shared by every protocol role.

    Until calibrated, the device transmits its calibration signal once the
    start delay has elapsed and retries it every `calibration_retry_s`.
    """

    role = "device"

    def __init__(self, config: ProtocolConfig):
        self.config = config
        self.calibrator = ClockCalibrator()
        self.phase = "uncalibrated"
        self.pending_n = 0
        self.transmit_mic = 0.0
        self.expected_own = 0.0
        self.deadline = 0.0

    def step(self, event: Event) -> List[Action]:
        """Consumes one event and returns the resulting actions."""
        if self.phase in ("uncalibrated", "calibrating"):
            return self._calibration_step(event)
        if isinstance(event, Tick):
            return self._on_tick(event)
        return self._on_detection(event)

    def _on_tick(self, event: Tick) -> List[Action]:
        raise NotImplementedError

    def _on_detection(self, event: PreambleDetected) -> List[Action]:
        raise NotImplementedError

    def _on_calibrated(self, event: PreambleDetected) -> List[Action]:
        return []

    def _transmit(self, n: int, kind: str, mic_index: float, **fields: Any) -> Transmit:
        self.pending_n = int(n)
        self.transmit_mic = mic_index
        if self.calibrator.is_calibrated:
            self.expected_own = n - self.calibrator.state.offset
            self.deadline = (
                self.expected_own
                + self.config.preamble_len
                + self.config.samples(self.config.detection_slack_s)
            )
        return Transmit(speaker_index=int(n), kind=kind, **fields)

    def _is_own(self, event: PreambleDetected) -> bool:
        tolerance = self.config.samples(self.config.own_tolerance_s)
        return abs(event.coarse_index - self.expected_own) <= tolerance

    def _calibration_step(self, event: Event) -> List[Action]:
        config = self.config
        if isinstance(event, Tick):
            if self.phase == "calibrating" and event.mic_index <= self.deadline:
                return []
            if event.mic_index < config.samples(config.start_delay_s):
                return []
            if self.phase == "calibrating":
                logger.debug("%s calibration timed out, retrying.", self.role)
            self.phase = "calibrating"
            action = self._transmit(
                event.speaker_index + config.latency_samples,
                "calibration",
                event.mic_index,
            )
            self.deadline = event.mic_index + config.samples(config.calibration_retry_s)
            return [action]
        if self.phase != "calibrating" or event.coarse_index < self.transmit_mic:
            return []
        if event.fine_index is None:
            logger.debug("%s calibration preamble lacks a direct path.", self.role)
            return []
        self.calibrator.self_calibrate(self.pending_n, event.fine_index)
        logger.info(
            "%s calibrated with index offset %.2f.", self.role, self.calibrator.state.offset
        )
        return self._on_calibrated(event)


class SenderState(DeviceState):
    """Sender of the two-way exchange.

    t_send runs from the fine arrival of the sender's own query at its own
    microphone to the fine arrival of the reply.
    """

    role = "sender"

    def __init__(self, config: ProtocolConfig, peer_id: int = -1):
        super().__init__(config)
        self.peer_id = peer_id
        self.exchange = 0
        self.next_query = 0.0
        self.own_arrival: Optional[float] = None
        self.own_score = 0.0
        self.own_valid = False
        self.target: int = peer_id

    def _on_calibrated(self, event: PreambleDetected) -> List[Action]:
        self.phase = "idle"
        self.next_query = max(
            event.fine_index + self.config.samples(self.config.exchange_period_s),
            self.config.samples(self.config.first_query_s),
        )
        return []

    def _query_node_id(self) -> Optional[int]:
        return None

    def _query(self, n: int, mic_index: float) -> Transmit:
        self.phase = "await_own"
        self.own_arrival = None
        return self._transmit(
            n, "query", mic_index, node_id=self._query_node_id(), info={"exchange": self.exchange}
        )

    def _fail(self, reason: str, mic_index: float) -> ExchangeFailed:
        logger.info("Exchange %d failed: %s.", self.exchange, reason)
        failure = ExchangeFailed(
            reason=reason, mic_index=mic_index, exchange=self.exchange, peer_id=self.target
        )
        self.exchange += 1
        return failure

    def _on_tick(self, event: Tick) -> List[Action]:
        if self.phase == "idle":
            if event.mic_index >= self.next_query:
                return [self._query(event.speaker_index + self.config.latency_samples, event.mic_index)]
            return []
        if event.mic_index <= self.deadline:
            return []
        if self.phase == "await_own":
            reason = "own preamble missed"
        else:
            reason = "reply timeout"
        return self._after_exchange([self._fail(reason, event.mic_index)], event)

    def _after_exchange(self, actions: List[Action], event: Event) -> List[Action]:
        """Returns to idle; the next query follows one period after the last one."""
        self.phase = "idle"
        reference = self.own_arrival if self.own_arrival is not None else self.expected_own
        self.next_query = reference + self.config.samples(self.config.exchange_period_s)
        return actions

    def _on_detection(self, event: PreambleDetected) -> List[Action]:
        config = self.config
        if self.phase == "await_own" and self._is_own(event):
            self.own_valid = event.fine_index is not None
            self.own_score = event.score
            if event.fine_index is None:
                self.own_arrival = float(event.coarse_index)
            else:
                self.own_arrival = event.fine_index
                self.calibrator.self_calibrate(self.pending_n, event.fine_index)
            self.phase = "await_reply"
            self.deadline = self.own_arrival + config.samples(
                config.timeout_factor * config.t_reply0
            )
            return []
        if self.phase != "await_reply":
            return []
        if event.coarse_index <= self.own_arrival + config.preamble_len / 2:
            return []
        if event.fine_index is None or not self.own_valid:
            return self._after_exchange(
                [self._fail("no direct path", event.coarse_index)], event
            )
        t_send = (event.fine_index - self.own_arrival) / config.sample_rate_hz
        try:
            tof = compute_tof(t_send, config.t_reply0, config.own_delta_s, config.peer_delta_s)
        except InconsistentExchangeError as error:
            return self._after_exchange([self._fail(str(error), event.coarse_index)], event)
        result = RangingResult(
            t_send=t_send,
            t_reply0=config.t_reply0,
            delta1=config.own_delta_s,
            delta2=config.peer_delta_s,
            tof=tof,
            distance_m=config.sound_speed * tof,
            sound_speed=config.sound_speed,
            timestamp_s=self.own_arrival / config.sample_rate_hz,
            exchange=self.exchange,
            peer_id=self.target,
            fine_indices={"own": self.own_arrival, "reply": event.fine_index},
            quality={"own": self.own_score, "reply": event.score},
        )
        logger.info("Exchange %d measured %.3f m.", self.exchange, result.distance_m)
        self.exchange += 1
        return self._after_exchange([ExchangeCompleted(result)], event)


class ReplierState(DeviceState):
    """Replier of the two-way exchange.

    The reply is written so that it reaches the replier's own microphone
    t_reply0 after the query did; its detection refreshes the calibration.
    """

    role = "replier"

    def __init__(self, config: ProtocolConfig, node_id: Optional[int] = None):
        super().__init__(config)
        self.node_id = node_id
        self.replies = 0
        self.own_reply_arrival: Optional[float] = None

    def _on_calibrated(self, event: PreambleDetected) -> List[Action]:
        self.phase = "listening"
        return []

    def _addressed(self, event: PreambleDetected) -> bool:
        return self.node_id is None or event.node_id == self.node_id

    def _on_tick(self, event: Tick) -> List[Action]:
        if self.phase == "await_own_reply" and event.mic_index > self.deadline:
            logger.debug("Own reply not detected, keeping the previous calibration.")
            self.phase = "listening"
        return []

    def _on_detection(self, event: PreambleDetected) -> List[Action]:
        if self.phase == "await_own_reply":
            if not self._is_own(event):
                return []
            self.phase = "listening"
            if event.fine_index is not None:
                self.calibrator.self_calibrate(self.pending_n, event.fine_index)
                self.own_reply_arrival = event.fine_index
            return self._on_own_reply(event)
        if not self._addressed(event):
            return []
        return self._reply(event)

    def _on_own_reply(self, event: PreambleDetected) -> List[Action]:
        return []

    def _reply(self, event: PreambleDetected) -> List[Action]:
        config = self.config
        if event.fine_index is None:
            return [
                ExchangeFailed(
                    reason="query without direct path",
                    mic_index=event.coarse_index,
                    exchange=self.replies,
                )
            ]
        state = self.calibrator.state
        try:
            n2 = schedule_reply(
                float(event.fine_index),
                state,
                config.t_reply0,
                config.sample_rate_hz,
                write_head=int(event.speaker_index + config.latency_samples),
            )
        except MissedReplySlotError as error:
            logger.warning("%s", error)
            return [
                ExchangeFailed(
                    reason="missed reply slot",
                    mic_index=event.coarse_index,
                    exchange=self.replies,
                )
            ]
        self.replies += 1
        self.phase = "await_own_reply"
        return [
            self._transmit(
                n2,
                "reply",
                event.coarse_index,
                node_id=self.node_id,
                info={"m2": event.fine_index, "gap_samples": event.fine_index - state.m1},
            )
        ]


def sender_step(event: Event, state: SenderState) -> List[Action]:
    """Advances the sender state machine by one event."""
    return state.step(event)


def replier_step(event: Event, state: ReplierState) -> List[Action]:
    """Advances the replier state machine by one event."""
    return state.step(event)
