"""Synthetic multipath presets: case echoes, reflections and early bumps."""

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple
import numpy as np
from aquarange.exceptions import ParameterError
from aquarange.hydrosim.geometry import BOTTOM, TOP, Geometry, build_geometry
from aquarange.hydrosim.scenario import PROFILE_PRESETS, SimScenario

Link = Tuple[int, int, int]


@dataclass(frozen=True)
class Tap:
    delay_s: float
    gain: float


@dataclass(frozen=True, eq=False)
class ChannelProfile:
    """Taps per (source device, destination device, microphone) link.

    The first tap of every link is the direct path. Early bumps arriving
    before it are kept apart from the taps.
    """

    preset: str
    taps: Dict[Link, Tuple[Tap, ...]]
    early_bumps: Dict[Link, Tuple[Tap, ...]]

    def links(self) -> Iterable[Link]:
        return self.taps.keys()

    def link(self, source: int, destination: int, mic: int) -> Tuple[Tap, ...]:
        """Every tap reaching a microphone, early bumps included."""
        key = (source, destination, mic)
        return self.early_bumps.get(key, ()) + self.taps[key]

    def direct_delay(self, source: int, destination: int, mic: int) -> float:
        return self.taps[(source, destination, mic)][0].delay_s

    def delay_spread(self, source: int, destination: int, mic: int) -> float:
        delays = [tap.delay_s for tap in self.taps[(source, destination, mic)]]
        return max(delays) - min(delays)


def _case_echoes(direct: Tap, rng: np.random.Generator) -> Tuple[Tap, ...]:
    count = int(rng.integers(5, 21))
    delays = direct.delay_s + rng.uniform(0.0, 3e-3, count)
    gains = direct.gain * rng.uniform(0.1, 1.3, count)
    return tuple(Tap(float(d), float(g)) for d, g in zip(delays, gains))


def _reflections(
    rng: np.random.Generator, density: int, strength: Tuple[float, float]
) -> Tuple[np.ndarray, np.ndarray]:
    count = int(rng.integers(20, 61)) * density
    extra = rng.uniform(0.5e-3, 25e-3, count)
    extra[0] = rng.uniform(10e-3, 25e-3)
    gains = rng.uniform(*strength, count) * np.exp(-extra / 8e-3)
    return extra, gains


def _early_bumps(direct: Tap, rng: np.random.Generator) -> Tuple[Tap, ...]:
    count = int(rng.integers(0, 3))
    bumps = []
    for _ in range(count):
        delay = direct.delay_s - rng.uniform(1e-3, 4e-3)
        gain = direct.gain * rng.uniform(0.3, 0.8)
        if delay > 0:
            bumps.append(Tap(float(delay), float(gain)))
    return tuple(sorted(bumps, key=lambda tap: tap.delay_s))


def make_channel_profile(
    preset: str,
    scenario: SimScenario,
    rng: np.random.Generator,
    geometry: Optional[Geometry] = None,
    sources: Optional[Iterable[int]] = None,
    time_s: float = 0.0,
) -> ChannelProfile:
    """Draws the taps of every link leaving `sources` at time `time_s`.

    Parameters
    ----------
    preset : str
        One of "clean", "case_air", "case_underwater_dense" and "shallow_severe".
    scenario : SimScenario
        Scenario providing geometry, sound speed and occlusion settings.
    rng : np.random.Generator
        Source of every random draw.
    geometry : Optional[Geometry]
        Session geometry; drawn from `rng` when missing.
    sources : Optional[Iterable[int]]
        Transmitting devices; all devices when missing.
    time_s : float
        Emission time, for moving devices.
    """
    if preset not in PROFILE_PRESETS:
        raise ParameterError(f"preset must be one of {PROFILE_PRESETS}, got '{preset}'.")
    if geometry is None:
        geometry = build_geometry(scenario, rng)
    speed = geometry.sound_speed
    sources = range(scenario.device_count) if sources is None else sources
    taps: Dict[Link, Tuple[Tap, ...]] = {}
    bumps: Dict[Link, Tuple[Tap, ...]] = {}
    for source in sources:
        for destination in range(scenario.device_count):
            remote = source != destination
            occluded = remote and scenario.occlusion_db > 0 and rng.random() < scenario.occlusion_rate
            attenuation = 10 ** (-scenario.occlusion_db / 20) if occluded else 1.0
            reflections = None
            if preset == "case_underwater_dense":
                reflections = _reflections(rng, 1, (0.1, 0.8))
            elif preset == "shallow_severe":
                reflections = _reflections(rng, 2, (0.2, 1.0))
            for mic in (BOTTOM, TOP):
                length = geometry.path_length(source, destination, mic, time_s)
                direct = Tap(length / speed, attenuation / max(length, 1.0))
                link = [direct]
                if preset != "clean":
                    link.extend(_case_echoes(direct, rng))
                if reflections is not None:
                    extra, gains = reflections
                    spreading = 1.0 / max(length, 1.0)
                    link.extend(
                        Tap(float(direct.delay_s + e), float(g * spreading))
                        for e, g in zip(extra, gains)
                    )
                    if remote:
                        bumps[(source, destination, mic)] = _early_bumps(direct, rng)
                taps[(source, destination, mic)] = (direct,) + tuple(
                    sorted(link[1:], key=lambda tap: tap.delay_s)
                )
    return ChannelProfile(preset=preset, taps=taps, early_bumps=bumps)
