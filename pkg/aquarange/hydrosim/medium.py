"""The shared water: transmissions on air, rendering and ground truth."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging
import numpy as np
from aquarange.audioclock import StreamClock
from aquarange.exceptions import TDMAViolationError
from aquarange.hydrosim.channel_profile import ChannelProfile, make_channel_profile
from aquarange.hydrosim.geometry import Geometry
from aquarange.hydrosim.propagate import HALF_WIDTH, render_reception
from aquarange.hydrosim.scenario import SimScenario

logger = logging.getLogger(__name__)

NOISE_BLOCK = 4096
BLOCK_OFFSET = 2**31


@dataclass(eq=False)
class Transmission:
    """One signal emitted by one device."""

    index: int
    device: int
    speaker_index: int
    samples: np.ndarray
    kind: str
    emit_time_s: float
    end_time_s: float
    profile: ChannelProfile
    node_id: Optional[int] = None
    info: Dict[str, Any] = field(default_factory=dict)


class Medium:
    """Renders what every microphone captures from the transmissions so far.

    Receptions are rendered once per (transmission, device, microphone) and
    cached. Noise is drawn per fixed block of mic samples from a generator
    seeded by the block position, so any window renders identically
    whatever order it is requested in.
    """

    def __init__(
        self,
        scenario: SimScenario,
        geometry: Geometry,
        clocks: Sequence[StreamClock],
        rng: np.random.Generator,
        noise_std: float,
        reference_gain: float,
    ):
        self._scenario = scenario
        self._geometry = geometry
        self._clocks = list(clocks)
        self._rng = rng
        self._noise_std = noise_std
        self._reference_gain = reference_gain
        self._noise_entropy = int(rng.integers(0, 2**62))
        self._transmissions: Dict[int, Transmission] = {}
        self._spans: Dict[int, Dict[int, Tuple[int, int]]] = {
            device: {} for device in range(len(self._clocks))
        }
        self._cache: Dict[Tuple[int, int, int], Tuple[int, np.ndarray]] = {}
        self._count = 0

    @property
    def transmissions(self) -> List[Transmission]:
        return list(self._transmissions.values())

    @property
    def noise_std(self) -> float:
        return self._noise_std

    def transmit(
        self,
        device: int,
        speaker_index: int,
        samples: np.ndarray,
        kind: str,
        node_id: Optional[int] = None,
        info: Optional[Dict[str, Any]] = None,
    ) -> Transmission:
        """Puts a signal on air, failing if another device is transmitting."""
        clock = self._clocks[device]
        emit = float(clock.speaker_time(speaker_index))
        end = float(clock.speaker_time(speaker_index + samples.size))
        for other in self._transmissions.values():
            if emit < other.end_time_s and other.emit_time_s < end:
                raise TDMAViolationError(
                    f"Device {device} transmits a {kind} during [{emit:.4f}, {end:.4f}] s "
                    f"while device {other.device} is on air during "
                    f"[{other.emit_time_s:.4f}, {other.end_time_s:.4f}] s."
                )
        profile = make_channel_profile(
            self._scenario.profile,
            self._scenario,
            self._rng,
            geometry=self._geometry,
            sources=(device,),
            time_s=emit,
        )
        transmission = Transmission(
            index=self._count,
            device=device,
            speaker_index=int(speaker_index),
            samples=np.asarray(samples, dtype=np.float64),
            kind=kind,
            emit_time_s=emit,
            end_time_s=end,
            profile=profile,
            node_id=node_id,
            info=dict(info or {}),
        )
        self._count += 1
        self._transmissions[transmission.index] = transmission
        for destination, mic_clock in enumerate(self._clocks):
            delays = [
                tap.delay_s
                for mic in (0, 1)
                for tap in profile.link(device, destination, mic)
            ]
            first = int(np.floor(mic_clock.mic_index(emit + min(delays)))) - HALF_WIDTH
            last = int(np.ceil(mic_clock.mic_index(end + max(delays)))) + HALF_WIDTH
            self._spans[destination][transmission.index] = (first, last)
        logger.debug("Device %d transmits a %s at %.4f s.", device, kind, emit)
        return transmission

    def has_arrival(self, device: int, start: int, stop: int) -> bool:
        """Tells whether any reception overlaps mic indices [start, stop)."""
        return any(
            first < stop and start < last for first, last in self._spans[device].values()
        )

    def _reception(self, transmission: Transmission, device: int, mic: int) -> Tuple[int, np.ndarray]:
        key = (transmission.index, device, mic)
        if key not in self._cache:
            self._cache[key] = render_reception(
                transmission.samples,
                transmission.profile.link(transmission.device, device, mic),
                self._clocks[transmission.device],
                self._clocks[device],
                transmission.speaker_index,
                carrier_offset_hz=self._scenario.carrier_offset_hz,
            )
        return self._cache[key]

    def _noise_block(self, device: int, mic: int, block: int) -> np.ndarray:
        rng = np.random.default_rng(
            [self._noise_entropy, device, mic, block + BLOCK_OFFSET]
        )
        noise = self._noise_std * rng.standard_normal(NOISE_BLOCK)
        if self._scenario.spike_rate > 0:
            spikes = rng.random(NOISE_BLOCK) < self._scenario.spike_rate
            signs = rng.choice([-1.0, 1.0], NOISE_BLOCK)
            amplitude = self._scenario.spike_amplitude * self._reference_gain
            noise = noise + spikes * signs * amplitude
        return noise

    def _noise(self, device: int, mic: int, start: int, length: int) -> np.ndarray:
        if self._noise_std == 0.0 and self._scenario.spike_rate == 0.0:
            return np.zeros(length)
        first, last = start // NOISE_BLOCK, (start + length - 1) // NOISE_BLOCK
        blocks = np.concatenate(
            [self._noise_block(device, mic, block) for block in range(first, last + 1)]
        )
        offset = start - first * NOISE_BLOCK
        return blocks[offset : offset + length]

    def render(self, device: int, mic: int, start: int, length: int) -> np.ndarray:
        """Returns mic samples [start, start + length) of a device."""
        stop = start + length
        output = self._noise(device, mic, start, length)
        for index, (first, last) in self._spans[device].items():
            if not (first < stop and start < last):
                continue
            begin, samples = self._reception(self._transmissions[index], device, mic)
            low, high = max(begin, start), min(begin + samples.size, stop)
            if high > low:
                output[low - start : high - start] += samples[low - begin : high - begin]
        return output

    def forget_before(self, time_s: float):
        """Drops transmissions whose every reception ended before `time_s`."""
        for index, transmission in list(self._transmissions.items()):
            ended = all(
                self._clocks[device].mic_time(spans[index][1]) < time_s
                for device, spans in self._spans.items()
                if index in spans
            )
            if not ended:
                continue
            del self._transmissions[index]
            for spans in self._spans.values():
                spans.pop(index, None)
            for key in [key for key in self._cache if key[0] == index]:
                del self._cache[key]

    def arrival_time(
        self,
        transmission: Transmission,
        device: int,
        mics: Sequence[int],
        sample: float = 0.0,
    ) -> float:
        """True direct-path arrival of one transmitted sample, averaged over `mics`."""
        delays = [
            transmission.profile.direct_delay(transmission.device, device, mic) for mic in mics
        ]
        emit = float(
            self._clocks[transmission.device].speaker_time(transmission.speaker_index + sample)
        )
        return emit + float(np.mean(delays))
