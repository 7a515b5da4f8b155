"""Positions of device centers, microphones and speakers over time."""

from typing import Tuple
import numpy as np
from aquarange.hydrosim.scenario import SimScenario

BOTTOM, TOP = 0, 1


class Geometry:
    """Device layout of one session.

    The bottom microphone sits at the device center, the top microphone
    `mic_separation_m` along the device orientation and the speaker
    `speaker_offset_m` along it.
    """

    def __init__(self, scenario: SimScenario, orientations: np.ndarray):
        self._scenario = scenario
        self._orientations = np.asarray(orientations, dtype=np.float64)
        self._speed = scenario.medium.sound_speed

    @property
    def sound_speed(self) -> float:
        return self._speed

    @property
    def orientations(self) -> np.ndarray:
        return self._orientations

    def center(self, device: int, t: float = 0.0) -> np.ndarray:
        scenario = self._scenario
        depth = -scenario.depth_m
        if not scenario.is_group:
            device = scenario.phone(device)
        if device == 0:
            return np.array([0.0, 0.0, depth])
        if scenario.is_group:
            count = len(scenario.diver_distances_m)
            angle = 2.0 * np.pi * (device - 1) / count
            distance = scenario.diver_distances_m[device - 1]
            return np.array([distance * np.cos(angle), distance * np.sin(angle), depth])
        if scenario.track:
            times, distances = zip(*scenario.track)
            return np.array([float(np.interp(t, times, distances)), 0.0, depth])
        return np.array([scenario.distance_m, 0.0, depth])

    def mic(self, device: int, mic: int, t: float = 0.0) -> np.ndarray:
        offset = self._scenario.mic_separation_m if mic == TOP else 0.0
        return self.center(device, t) + offset * self._orientations[device]

    def speaker(self, device: int, t: float = 0.0) -> np.ndarray:
        return self.center(device, t) + self._scenario.speaker_offset_m * self._orientations[device]

    def path_length(self, source: int, destination: int, mic: int, t: float = 0.0) -> float:
        """Distance from the speaker of `source` to a microphone of `destination`."""
        return float(np.linalg.norm(self.speaker(source, t) - self.mic(destination, mic, t)))

    def mics_for_mode(self, mic_mode: str) -> Tuple[int, ...]:
        if mic_mode == "bottom":
            return (BOTTOM,)
        if mic_mode == "top":
            return (TOP,)
        return (BOTTOM, TOP)

    def own_delta(self, device: int, mic_mode: str = "dual") -> float:
        """Speaker-to-microphone delay matching the fine-index reference of `mic_mode`."""
        lengths = [self.path_length(device, device, mic) for mic in self.mics_for_mode(mic_mode)]
        return float(np.mean(lengths)) / self._speed


def draw_orientations(scenario: SimScenario, rng: np.random.Generator) -> np.ndarray:
    """Returns one unit vector per device, from bottom to top microphone."""
    count = scenario.device_count
    if scenario.orientation == "vertical":
        return np.tile([0.0, 0.0, 1.0], (count, 1))
    if scenario.orientation == "axial":
        return np.tile([1.0, 0.0, 0.0], (count, 1))
    vectors = rng.standard_normal((count, 3))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    if scenario.swap_roles:
        return vectors[::-1].copy()
    return vectors


def build_geometry(scenario: SimScenario, rng: np.random.Generator) -> Geometry:
    """Builds the geometry of one session."""
    return Geometry(scenario, draw_orientations(scenario, rng))
