"""Discrete-event sessions driving every device through the shared medium."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, List, Optional, Set, Tuple
import logging
import math
import numpy as np
import simpy
from tqdm.auto import tqdm
from aquarange.audioclock import StreamClock, reply_error
from aquarange.dualmic import DualMicParams
from aquarange.hydrosim.device import SimDevice
from aquarange.hydrosim.geometry import Geometry, build_geometry
from aquarange.hydrosim.medium import Medium, Transmission
from aquarange.hydrosim.propagate import noise_std_for_snr
from aquarange.hydrosim.scenario import SimScenario
from aquarange.multinode import DiverState, LeaderState
from aquarange.ranging import (
    DistanceOverheard,
    ExchangeCompleted,
    ExchangeFailed,
    ProtocolConfig,
    RangingResult,
    ReplierState,
    RoundCompleted,
    SenderState,
    Tick,
    Transmit,
)
from aquarange.exceptions import SpeakerUnderrunError, TDMAViolationError
from aquarange.receiver import timing_reference
from aquarange.utils import RecordLog
from aquarange.waveform import build_calibration_signal, build_id_tone, build_preamble

logger = logging.getLogger(__name__)

CALIBRATION_SLOT_S = 1.0
FORGET_AFTER_S = 3.0


@dataclass
class ExchangeRecord:
    """One exchange seen by the sender, with the simulator's ground truth."""

    session: int
    exchange: int
    sender: int
    replier: int
    timestamp_s: float
    distance_m: float
    true_distance_m: float
    error_m: float
    tof_s: float
    true_tof_s: float
    t_send_s: float
    realized_t_reply_s: float
    reply_error_s: float
    predicted_reply_error_s: float
    gap_samples: float
    own_score: float
    reply_score: float
    failure: str = ""
    result: Optional[RangingResult] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        """Returns the exchange as a CSV row, without the nested result."""
        row = asdict(self)
        row.pop("result")
        return row


@dataclass
class SessionOutcome:
    exchanges: List[ExchangeRecord]
    rounds: List[Dict[str, Any]]
    records: RecordLog


class Session:
    """A deployment from the moment every stream opens until its exchanges are done.

    Each device is a simpy process waking at the end of every microphone
    buffer, as timed by its own mic clock. Buffers that no transmission can
    reach are skipped.
    """

    def __init__(
        self,
        scenario: SimScenario,
        session_index: int,
        seed: np.random.SeedSequence,
        exchanges: int,
    ):
        self.scenario = scenario
        self.session_index = session_index
        self.target = exchanges
        self.records = RecordLog()
        rng = np.random.default_rng(seed)
        spec = scenario.spec
        self.spec = spec
        self.sample_rate = spec.sample_rate_hz
        self.buffer_len = int(round(scenario.buffer_seconds * self.sample_rate))
        self.geometry: Geometry = build_geometry(scenario, rng)
        self.sound_speed = self.geometry.sound_speed
        clocks = []
        for phone in range(scenario.device_count):
            alpha, beta = scenario.skew(scenario.phone(phone) if not scenario.is_group else phone)
            clocks.append(
                StreamClock(
                    alpha=alpha,
                    beta=beta,
                    t_s0=float(rng.uniform(0.0, scenario.buffer_offset_s)),
                    t_m0=float(rng.uniform(0.0, scenario.buffer_offset_s)),
                    nominal_fs=self.sample_rate,
                )
            )
        # Clocks follow the phones, drawn in phone order.
        self.clocks = clocks[::-1] if scenario.swap_roles else clocks
        preamble = build_preamble(spec).samples
        reference_gain = 1.0 / max(scenario.reference_distance_m, 1.0)
        signal_power = float(np.mean(preamble**2)) * reference_gain**2
        self.medium = Medium(
            scenario,
            self.geometry,
            self.clocks,
            rng,
            noise_std_for_snr(signal_power, scenario.snr_db),
            reference_gain,
        )
        self.mics = self.geometry.mics_for_mode(scenario.mic_mode)
        self.devices = [self._build_device(index) for index in range(scenario.device_count)]
        self.exchanges: List[ExchangeRecord] = []
        self.overheard: Dict[Tuple[int, int], float] = {}
        self.leader_distances: Dict[Tuple[int, int], ExchangeRecord] = {}
        self.rounds_done = 0
        self._last_query: Optional[Transmission] = None
        self._last_reply: Dict[int, Tuple[Transmission, int]] = {}
        self._collided: Set[int] = set()
        self._env = simpy.Environment()
        self._done = self._env.event()

    def _config(self, index: int) -> ProtocolConfig:
        scenario = self.scenario
        peer = 1 if index == 0 else 0
        own = self.geometry.own_delta(index, scenario.mic_mode) + scenario.delta_error_s
        other = self.geometry.own_delta(peer, scenario.mic_mode) + scenario.delta_error_s
        return ProtocolConfig(
            sample_rate_hz=self.sample_rate,
            preamble_len=self.spec.total_len,
            t_reply0=scenario.reply_interval_s,
            exchange_period_s=scenario.period_s,
            latency_samples=int(round(scenario.speaker_latency_s * self.sample_rate)),
            own_delta_s=own,
            peer_delta_s=other,
            sound_speed=self.sound_speed,
            start_delay_s=CALIBRATION_SLOT_S * index,
            first_query_s=CALIBRATION_SLOT_S * scenario.device_count + 0.5,
        )

    def _build_device(self, index: int) -> SimDevice:
        scenario = self.scenario
        config = self._config(index)
        if scenario.is_group:
            if index == 0:
                state = LeaderState(config, roster=range(1, scenario.device_count))
            else:
                state = DiverState(config, node_id=index, overhear_reference=scenario.overhear_reference)
        else:
            state = SenderState(config, peer_id=1) if index == 0 else ReplierState(config)
        params = DualMicParams(
            lambda_margin=scenario.lambda_margin,
            mic_separation_m=scenario.mic_separation_m,
            sound_speed_mps=self.sound_speed,
            sample_rate_hz=self.sample_rate,
        )
        return SimDevice(
            index,
            state,
            self.clocks[index],
            self.spec,
            params,
            scenario.mic_mode,
            config.latency_samples,
            decode_ids=scenario.is_group,
            records=self.records,
        )

    def _time_limit(self) -> float:
        scenario = self.scenario
        if scenario.is_group:
            per_round = (scenario.device_count - 1) * 4.0 * scenario.reply_interval_s
            return CALIBRATION_SLOT_S * scenario.device_count + (self.target + 2) * per_round + 10.0
        return CALIBRATION_SLOT_S * scenario.device_count + (self.target + 2) * 2.0 * scenario.period_s + 10.0

    def run(self) -> SessionOutcome:
        """Runs the session until enough exchanges, or rounds, are recorded."""
        if self.target > 0:
            for device in self.devices:
                self._env.process(self._listen(device))
            self._env.process(self._watchdog(self._time_limit()))
            self._env.run(until=self._done)
        return SessionOutcome(self.exchanges, self._round_rows(), self.records)

    def _watchdog(self, limit: float):
        yield self._env.timeout(limit)
        if not self._done.triggered:
            logger.warning(
                "Session %d stopped at its time limit with %d exchanges.",
                self.session_index,
                len(self.exchanges),
            )
            self._done.succeed()

    def _listen(self, device: SimDevice):
        k = 0
        while not self._done.triggered:
            end = (k + 1) * self.buffer_len
            wake = float(device.clock.mic_time(end))
            yield self._env.timeout(max(wake - self._env.now, 0.0))
            if self._done.triggered:
                return
            self._service(device, k * self.buffer_len, end)
            k += 1

    def _service(self, device: SimDevice, start: int, end: int):
        now = self._env.now
        self.medium.forget_before(now - FORGET_AFTER_S)
        device.listen(self.medium, start, end - start)
        for detection in device.ready(end):
            event = device.analyze(detection, self.medium, now)
            self._execute(device, device.state.step(event), now)
        tick = Tick(mic_index=end, speaker_index=device.speaker.play_position(now))
        self._execute(device, device.state.step(tick), now)

    def _signal(self, action: Transmit) -> np.ndarray:
        if action.kind == "calibration":
            return build_calibration_signal(self.spec)
        samples = build_preamble(self.spec).samples
        if self.scenario.is_group and action.node_id is not None:
            samples = np.concatenate([samples, build_id_tone(action.node_id, self.spec)])
        return samples

    def _execute(self, device: SimDevice, actions: List[Any], now: float):
        for action in actions:
            if isinstance(action, Transmit):
                self._transmit(device, action, now)
            elif isinstance(action, (ExchangeCompleted, ExchangeFailed)):
                self._record(device, action)
            elif isinstance(action, DistanceOverheard):
                round_index = self._last_reply.get(device.index, (None, -1))[1]
                self.overheard[(round_index, action.node_id)] = action.distance_m
            elif isinstance(action, RoundCompleted):
                self.rounds_done += 1
                if self.rounds_done >= self.target and not self._done.triggered:
                    self._done.succeed()

    def _transmit(self, device: SimDevice, action: Transmit, now: float):
        samples = self._signal(action)
        try:
            device.speaker.write(action.speaker_index, samples, now)
        except SpeakerUnderrunError as error:
            logger.warning("Device %d: %s", device.index, error)
            return
        try:
            transmission = self.medium.transmit(
                device.index,
                action.speaker_index,
                samples,
                action.kind,
                node_id=action.node_id,
                info=action.info,
            )
        except TDMAViolationError as error:
            # The colliding signal never reaches a receiver; its exchange then fails.
            logger.warning("Device %d: %s", device.index, error)
            self.records.add(
                "tdma_collision",
                device=device.index,
                kind=action.kind,
                node_id=action.node_id,
                time_s=now,
            )
            self._collided.add(device.index)
            return
        if action.kind == "query":
            self._last_query = transmission
            self._collided.clear()
        elif action.kind == "reply":
            leader = self.devices[0].state
            round_index = leader.round_index if isinstance(leader, LeaderState) else -1
            self._last_reply[device.index] = (transmission, round_index)

    def _record(self, device: SimDevice, action: Any):
        if device.index != 0:
            self.records.add("replier_failure", device=device.index, reason=action.reason)
            return
        record = self._exchange_record(action)
        self.exchanges.append(record)
        if self.scenario.is_group:
            leader = device.state
            # The leader advances before its actions run; position 0 means the round wrapped.
            round_index = leader.round_index if leader.position else leader.round_index - 1
            self.leader_distances[(round_index, record.replier)] = record
        elif len(self.exchanges) >= self.target and not self._done.triggered:
            self._done.succeed()

    def _exchange_record(self, action: Any) -> ExchangeRecord:
        result = action.result if isinstance(action, ExchangeCompleted) else None
        replier = result.peer_id if result is not None else action.peer_id
        replier = replier if replier >= 0 else 1
        query = self._last_query
        reply = self._last_reply.get(replier, (None, -1))[0]
        if query is not None and reply is not None and reply.emit_time_s < query.emit_time_s:
            reply = None
        nan = float("nan")
        true_tof = realized = predicted = gap = nan
        if query is not None:
            true_tof = self.medium.arrival_time(query, replier, self.mics) - query.emit_time_s
            if reply is not None:
                back = self.medium.arrival_time(reply, 0, self.mics) - reply.emit_time_s
                true_tof = (true_tof + back) / 2.0
                # Both ends are timed where the receiver times them.
                reference = timing_reference(self.spec, guard=self.spec.cp_len)
                realized = self.medium.arrival_time(
                    reply, replier, self.mics, reference
                ) - self.medium.arrival_time(query, replier, self.mics, reference)
                gap = float(reply.info.get("gap_samples", nan))
                alpha, beta = self.scenario.skew(replier)
                predicted = reply_error(alpha, beta, self.scenario.reply_interval_s, gap, self.sample_rate)
        true_distance = self.sound_speed * true_tof
        failure = "" if result is not None else action.reason
        if result is None and self._collided & {0, replier}:
            failure = "tdma collision"
        self._collided -= {0, replier}
        distance = result.distance_m if result is not None else nan
        return ExchangeRecord(
            session=self.session_index,
            exchange=result.exchange if result is not None else action.exchange,
            sender=0,
            replier=replier,
            timestamp_s=query.emit_time_s if query is not None else nan,
            distance_m=distance,
            true_distance_m=true_distance,
            error_m=distance - true_distance,
            tof_s=result.tof if result is not None else nan,
            true_tof_s=true_tof,
            t_send_s=result.t_send if result is not None else nan,
            realized_t_reply_s=realized,
            reply_error_s=realized - self.scenario.reply_interval_s,
            predicted_reply_error_s=predicted,
            gap_samples=gap,
            own_score=result.quality.get("own", nan) if result is not None else nan,
            reply_score=result.quality.get("reply", nan) if result is not None else nan,
            failure=failure,
            result=result,
        )

    def _round_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for (round_index, diver), record in sorted(self.leader_distances.items()):
            rows.append(
                {
                    "session": self.session_index,
                    "round": round_index,
                    "diver_id": diver,
                    "leader_distance_m": record.distance_m,
                    "overheard_distance_m": self.overheard.get((round_index, diver), float("nan")),
                    "true_distance_m": record.true_distance_m,
                }
            )
        return rows


def run_sessions(
    scenario: SimScenario,
    exchanges: int,
    threads: int = 1,
    progress: bool = False,
    single_session: bool = False,
) -> List[SessionOutcome]:
    """Splits `exchanges` into sessions with their own seeds and runs them in parallel."""
    if exchanges <= 0:
        return []
    per_session = exchanges if single_session else scenario.exchanges_per_session
    count = math.ceil(exchanges / per_session)
    seeds = np.random.SeedSequence(scenario.seed).spawn(count)
    targets = [min(per_session, exchanges - i * per_session) for i in range(count)]

    def run_one(index: int) -> SessionOutcome:
        return Session(scenario, index, seeds[index], targets[index]).run()

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        return list(
            tqdm(
                executor.map(run_one, range(count)),
                total=count,
                desc=f"Simulating {scenario.name}",
                disable=not progress,
                leave=False,
            )
        )
