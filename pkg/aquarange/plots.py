"""Optional SVG figures of simulation outputs."""

from typing import Dict, List
import os
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from aquarange.hydrosim import TrialReport, SimScenario, make_channel_profile, build_geometry  # noqa: E402


def plot_error_cdfs(reports: List[TrialReport], path: str) -> str:
    """Draws one CDF of absolute error per report."""
    figure, axis = plt.subplots(figsize=(5, 4))
    for report in reports:
        values, probabilities = report.cdf
        if values.size:
            axis.step(values, probabilities, where="post", label=report.scenario.name)
    axis.set_xlabel("Absolute error (m)")
    axis.set_ylabel("CDF")
    axis.set_ylim(0, 1)
    axis.grid(True, alpha=0.3)
    if reports:
        axis.legend()
    return _save(figure, path)


def plot_trajectory(report: TrialReport, path: str) -> str:
    """Draws estimated against true distance over time."""
    records = report.records
    figure, axis = plt.subplots(figsize=(6, 4))
    axis.plot(records["timestamp_s"], records["true_distance_m"], label="Ground truth")
    axis.plot(records["timestamp_s"], records["distance_m"], "o", markersize=3, label="Estimate")
    axis.set_xlabel("Time (s)")
    axis.set_ylabel("Distance (m)")
    axis.legend()
    axis.grid(True, alpha=0.3)
    return _save(figure, path)


def plot_channel_profiles(scenario: SimScenario, path: str, seed: int = 0) -> str:
    """Draws the taps of both microphones of the replier for one transmission."""
    rng = np.random.default_rng(seed)
    geometry = build_geometry(scenario, rng)
    profile = make_channel_profile(scenario.profile, scenario, rng, geometry=geometry, sources=(0,))
    figure, axes = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    labels: Dict[int, str] = {0: "Bottom microphone", 1: "Top microphone"}
    for mic, axis in enumerate(axes):
        taps = profile.link(0, 1, mic)
        direct = profile.direct_delay(0, 1, mic)
        delays = np.array([tap.delay_s - direct for tap in taps]) * 1e3
        gains = np.array([tap.gain for tap in taps])
        axis.stem(delays, gains / gains.max())
        axis.set_title(labels[mic])
        axis.set_ylabel("Gain")
    axes[-1].set_xlabel("Delay from the direct path (ms)")
    return _save(figure, path)


def _save(figure, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    figure.tight_layout()
    figure.savefig(path, format="svg")
    plt.close(figure)
    return path
