"""Tests whether the channel, propagation and medium simulation works as expected."""

import json
import os
from dataclasses import replace
import numpy as np
import pytest
from scipy.signal import correlate
import aquarange
from aquarange.audioclock import StreamClock
from aquarange.exceptions import ParameterError, ScenarioError, TDMAViolationError
from aquarange.hydrosim import (
    Medium,
    Session,
    SimScenario,
    build_geometry,
    expand_scenario,
    fractional_delay_filter,
    load_scenarios,
    make_channel_profile,
    Tap,
    propagate,
    render_reception,
    resample,
    run_round_robin,
    run_trials,
    windowed_sinc,
)
from aquarange.dualmic import refine_peak
from aquarange.ranging import ExchangeFailed, Transmit
from aquarange.receiver import cross_correlate
from aquarange.waveform import WaveformSpec, build_preamble

FS = 44100
PREAMBLE = build_preamble(WaveformSpec.short())
SCENARIOS = os.path.join(os.path.dirname(aquarange.__file__), "scenarios")


def _setup(profile: str = "clean", seed: int = 0, **fields):
    scenario = SimScenario(distance_m=15.0, profile=profile, orientation="axial", **fields)
    rng = np.random.default_rng(seed)
    geometry = build_geometry(scenario, rng)
    return scenario, rng, geometry


def test_clean_profile():
    """Tests whether the clean preset has one tap at the geometric delay."""
    scenario, rng, geometry = _setup()
    profile = make_channel_profile("clean", scenario, rng, geometry=geometry)
    for source, destination, mic in profile.links():
        taps = profile.link(source, destination, mic)
        assert len(taps) == 1
        length = geometry.path_length(source, destination, mic)
        assert taps[0].delay_s == pytest.approx(length / 1500.0)
        assert taps[0].gain == pytest.approx(1.0 / max(length, 1.0))
    assert profile.direct_delay(0, 1, 0) == pytest.approx(14.99 / 1500.0)
    assert profile.direct_delay(0, 1, 1) == pytest.approx(15.14 / 1500.0)


def test_case_profiles():
    """Tests whether case echoes and reflections never precede the direct path."""
    scenario, rng, geometry = _setup()
    for _ in range(20):
        air = make_channel_profile("case_air", scenario, rng, geometry=geometry)
        dense = make_channel_profile("case_underwater_dense", scenario, rng, geometry=geometry)
        for key in air.links():
            taps = air.taps[key]
            assert 6 <= len(taps) <= 21
            assert all(tap.delay_s >= taps[0].delay_s for tap in taps)
            assert air.delay_spread(*key) <= 3e-3 + 1e-12
            assert taps[0].gain > 0
            assert key not in air.early_bumps
        for key in dense.links():
            taps = dense.taps[key]
            assert all(tap.delay_s >= taps[0].delay_s for tap in taps)
            assert dense.delay_spread(*key) <= 25e-3 + 1e-12
            bumps = dense.early_bumps.get(key, ())
            assert len(bumps) <= 2
            assert all(bump.delay_s < taps[0].delay_s for bump in bumps)
            if key[0] == key[1]:
                assert bumps == ()


def test_severe_profile_is_denser():
    """Tests whether the shallow preset has more reflections than the dense one."""
    scenario, rng, geometry = _setup()
    dense = [len(make_channel_profile("case_underwater_dense", scenario, rng, geometry=geometry).taps[(0, 1, 0)]) for _ in range(30)]
    severe = [len(make_channel_profile("shallow_severe", scenario, rng, geometry=geometry).taps[(0, 1, 0)]) for _ in range(30)]
    assert np.mean(severe) > np.mean(dense)


def test_case_air_displaces_strongest_path():
    """Tests whether case echoes outgrow the direct path in at least half of the draws."""
    scenario, rng, geometry = _setup()
    displaced = 0
    for _ in range(100):
        taps = make_channel_profile("case_air", scenario, rng, geometry=geometry).taps[(0, 1, 0)]
        displaced += int(np.argmax([tap.gain for tap in taps]) != 0)
    assert displaced >= 50


def test_reflection_presets_delay_spread():
    """Tests whether the underwater presets spread every remote link over at least 10 ms."""
    scenario, rng, geometry = _setup()
    for preset in ("case_underwater_dense", "shallow_severe"):
        for _ in range(20):
            profile = make_channel_profile(preset, scenario, rng, geometry=geometry)
            for key in profile.links():
                assert profile.delay_spread(*key) >= 10e-3, (preset, key)


def test_occlusion():
    """Tests whether occlusion attenuates remote direct paths only."""
    scenario, rng, geometry = _setup(occlusion_db=20.0, occlusion_rate=1.0)
    profile = make_channel_profile("clean", scenario, rng, geometry=geometry)
    remote = geometry.path_length(0, 1, 0)
    assert profile.taps[(0, 1, 0)][0].gain == pytest.approx(0.1 / remote)
    local = geometry.path_length(0, 0, 0)
    assert profile.taps[(0, 0, 0)][0].gain == pytest.approx(1.0)
    assert local < 1.0


def test_unknown_preset():
    """Tests whether unknown presets are rejected."""
    scenario, rng, _ = _setup()
    with pytest.raises(ParameterError):
        make_channel_profile("open_ocean", scenario, rng)


def test_windowed_sinc():
    """Tests whether the interpolation kernel is one at zero and vanishes outside its support."""
    assert windowed_sinc(np.array([0.0]))[0] == pytest.approx(1.0)
    assert np.allclose(windowed_sinc(np.array([1.0, 2.0, -3.0])), 0.0, atol=1e-12)
    assert np.all(windowed_sinc(np.array([16.0, 20.0, -17.0])) == 0.0)


def test_fractional_delay():
    """Tests whether a fractional delay shifts a band-limited tone."""
    t = np.arange(4000)
    tone = np.sin(2 * np.pi * 2000 * t / FS)
    start, fir = fractional_delay_filter(np.array([3.5]), np.array([1.0]))
    delayed = np.convolve(tone, fir)
    expected = np.sin(2 * np.pi * 2000 * (np.arange(delayed.size) + start - 3.5) / FS)
    assert np.max(np.abs(delayed[100:3900] - expected[100:3900])) < 1e-2


def test_resample():
    """Tests whether resampling preserves a band-limited tone on the new grid."""
    t = np.arange(8000)
    tone = np.sin(2 * np.pi * 3000 * t / FS)
    assert np.array_equal(resample(tone, 1.0), tone)
    ratio = 1.0 + 80e-6
    resampled = resample(tone, ratio)
    j = np.arange(resampled.size)
    expected = np.sin(2 * np.pi * 3000 * (j / ratio) / FS)
    assert np.max(np.abs(resampled[100:-100] - expected[100:-100])) < 1e-2


def test_propagate_delay():
    """Tests whether the microphones receive the preamble at their path delays."""
    scenario, rng, geometry = _setup()
    profile = make_channel_profile("clean", scenario, rng, geometry=geometry, sources=(0,))
    streams = propagate(PREAMBLE.samples, profile, (StreamClock(), StreamClock()), None, rng)
    bottom = cross_correlate(streams[0], PREAMBLE).peak_index
    top = cross_correlate(streams[1], PREAMBLE).peak_index
    assert abs(bottom - 14.99 / 1500 * FS) <= 1
    assert abs(top - 15.14 / 1500 * FS) <= 1


def _refined_delay(received: np.ndarray, first: int = 0) -> float:
    scores = correlate(received, PREAMBLE.samples, mode="valid")
    return first + refine_peak(scores, int(np.argmax(scores)))


def test_propagate_sub_sample_delay():
    """Tests whether both microphones and their difference land within a tenth of a sample."""
    scenario, rng, geometry = _setup()
    profile = make_channel_profile("clean", scenario, rng, geometry=geometry, sources=(0,))
    streams = propagate(PREAMBLE.samples, profile, (StreamClock(), StreamClock()), None, rng)
    bottom = _refined_delay(streams[0])
    top = _refined_delay(streams[1])
    assert bottom == pytest.approx(14.99 / 1500 * FS, abs=0.1)
    assert top == pytest.approx(15.14 / 1500 * FS, abs=0.1)
    assert top - bottom == pytest.approx(0.15 / 1500 * FS, abs=0.1)


def test_render_reception_conserves_energy():
    """Tests whether a unit-gain tap keeps the received energy within 0.1% of the sent one."""
    for delay in (441.0, 441.3, 441.75):
        first, received = render_reception(
            PREAMBLE.samples, [Tap(delay / FS, 1.0)], StreamClock(), StreamClock(), 0
        )
        ratio = np.sum(received**2) / np.sum(PREAMBLE.samples**2)
        assert ratio == pytest.approx(1.0, abs=1e-3)
        assert _refined_delay(received, first) == pytest.approx(delay, abs=0.1)


def test_propagate_snr():
    """Tests whether the added noise matches the requested SNR within half a decibel."""
    scenario, _, geometry = _setup()
    profile = make_channel_profile("clean", scenario, np.random.default_rng(0), geometry=geometry, sources=(0,))
    clocks = (StreamClock(), StreamClock())
    clean = propagate(PREAMBLE.samples, profile, clocks, None, np.random.default_rng(1))
    for snr_db in (10.0, 20.0):
        noisy = propagate(PREAMBLE.samples, profile, clocks, snr_db, np.random.default_rng(1))
        power = np.sum(clean[0] ** 2) / PREAMBLE.total_len
        measured = 10 * np.log10(power / np.var(noisy[0] - clean[0]))
        assert measured == pytest.approx(snr_db, abs=0.5)


def test_propagate_skewed_clocks():
    """Tests whether the reception lands at the mic index of its arrival time."""
    scenario, rng, geometry = _setup()
    profile = make_channel_profile("clean", scenario, rng, geometry=geometry, sources=(0,))
    clocks = (StreamClock(alpha=40e-6, t_s0=0.002), StreamClock(beta=-40e-6, t_m0=-0.01))
    streams = propagate(PREAMBLE.samples, profile, clocks, None, rng)
    arrival = clocks[0].speaker_time(0) + profile.direct_delay(0, 1, 0)
    expected = clocks[1].mic_index(arrival)
    assert abs(cross_correlate(streams[0], PREAMBLE).peak_index - expected) <= 1


def _medium(noise_std: float = 0.0) -> Medium:
    scenario, rng, geometry = _setup()
    return Medium(scenario, geometry, [StreamClock(), StreamClock()], rng, noise_std, 1 / 15)


def test_medium_tdma():
    """Tests whether overlapping transmissions raise a TDMA violation."""
    medium = _medium()
    medium.transmit(0, 0, PREAMBLE.samples, "query")
    with pytest.raises(TDMAViolationError):
        medium.transmit(1, 5000, PREAMBLE.samples, "reply")
    medium.transmit(1, 20000, PREAMBLE.samples, "reply")
    assert len(medium.transmissions) == 2


def test_session_records_collisions():
    """Tests whether a reply sent over a query is logged as a collision instead of aborting the session."""
    scenario = SimScenario(distance_m=10.0, profile="clean", orientation="axial")
    session = Session(scenario, 0, np.random.SeedSequence(0), 1)
    session._transmit(session.devices[0], Transmit(speaker_index=44100, kind="query"), 0.0)
    session._transmit(session.devices[1], Transmit(speaker_index=45100, kind="reply", node_id=1), 0.0)
    assert [t.kind for t in session.medium.transmissions] == ["query"]
    collisions = [r for r in session.records.records if r["kind"] == "tdma_collision"]
    assert len(collisions) == 1
    assert collisions[0]["device"] == 1
    assert collisions[0]["kind"] == "reply"
    failed = ExchangeFailed(reason="reply timeout", mic_index=0.0, exchange=0, peer_id=1)
    session._record(session.devices[0], failed)
    assert session.exchanges[-1].failure == "tdma collision"
    session._record(session.devices[0], failed)
    assert session.exchanges[-1].failure == "reply timeout"


def test_medium_render():
    """Tests whether rendering is identical in one window or in pieces."""
    medium = _medium(noise_std=0.01)
    transmission = medium.transmit(0, 0, PREAMBLE.samples, "query")
    whole = medium.render(1, 0, 0, 30000)
    pieces = np.concatenate([medium.render(1, 0, 0, 10000), medium.render(1, 0, 10000, 20000)])
    assert np.array_equal(whole, pieces)
    assert abs(cross_correlate(whole, PREAMBLE).peak_index - 14.99 / 1500 * FS) <= 1
    assert medium.arrival_time(transmission, 1, (0,)) == pytest.approx(14.99 / 1500)
    assert medium.has_arrival(1, 0, 1000)
    assert not medium.has_arrival(1, 40000, 50000)
    medium.forget_before(10.0)
    assert medium.transmissions == []


def test_scenario_validation():
    """Tests whether malformed scenarios name the offending field."""
    with pytest.raises(ScenarioError, match="colour"):
        SimScenario.from_dict({"distance_m": 10, "colour": "blue"})
    with pytest.raises(ScenarioError, match="profile"):
        SimScenario(profile="open_ocean")
    with pytest.raises(ScenarioError, match="t_reply0"):
        SimScenario(t_reply0=0.5)
    with pytest.raises(ScenarioError):
        SimScenario.from_dict({"distance_m": "far"})
    with pytest.raises(ScenarioError):
        SimScenario(diver_distances_m=tuple(range(1, 17)))
    with pytest.raises(ScenarioError):
        SimScenario(track=((0.0, 5.0), (0.0, 6.0)))
    with pytest.raises(ScenarioError, match="swap_roles"):
        SimScenario(diver_distances_m=(7.0,), swap_roles=True)


def test_scenario_round_trip():
    """Tests whether a scenario is rebuilt from its dictionary."""
    scenario = SimScenario(
        name="x", diver_distances_m=(7.0, 9.0), skews_ppm=((40.0, -20.0),), preamble="long"
    )
    assert SimScenario.from_dict(scenario.to_dict()) == scenario
    assert scenario.reply_interval_s == 1.5
    assert scenario.device_count == 3


def test_expand_scenario():
    """Tests whether a distance list expands into one scenario per distance."""
    scenarios = expand_scenario({"name": "sweep", "distances_m": [10, 20]})
    assert [s.name for s in scenarios] == ["sweep_10m", "sweep_20m"]
    assert [s.distance_m for s in scenarios] == [10.0, 20.0]
    with pytest.raises(ScenarioError):
        expand_scenario({"distances_m": []})


def test_load_scenarios(tmp_path):
    """Tests whether scenario files load and report their errors."""
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps([{"name": "a"}, {"name": "b", "distances_m": [5, 6]}]))
    assert len(load_scenarios(str(path))) == 3
    with pytest.raises(ScenarioError):
        load_scenarios(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ScenarioError):
        load_scenarios(str(broken))


def test_bundled_scenarios():
    """Tests whether every bundled scenario file is valid."""
    names = sorted(os.listdir(SCENARIOS))
    assert "dist_sweep.json" in names
    for name in names:
        assert load_scenarios(os.path.join(SCENARIOS, name))
    assert len(load_scenarios(os.path.join(SCENARIOS, "dist_sweep.json"))) == 4


def test_track_geometry():
    """Tests whether a tracked replier moves along its waypoints."""
    scenario = SimScenario(track=((0.0, 5.0), (60.0, 14.0)), orientation="axial")
    geometry = build_geometry(scenario, np.random.default_rng(0))
    assert geometry.center(1, 30.0)[0] == pytest.approx(9.5)
    assert geometry.center(1, 100.0)[0] == pytest.approx(14.0)
    assert scenario.reference_distance_m == 5.0


def test_run_trials_clean():
    """Tests whether a few clean exchanges are measured exactly."""
    report = run_trials(SimScenario(distance_m=10.0, profile="clean", seed=1), 3)
    assert len(report.records) == 3
    assert (report.records["failure"] == "").all()
    assert report.records["error_m"].abs().max() <= 0.05
    assert report.statistics["success_rate"] == 1.0


def test_swapped_roles_measure_same_distance():
    """Tests whether exchanging sender and replier phones moves each distance by under two samples."""
    scenario = SimScenario(
        distance_m=20.0,
        profile="clean",
        orientation="random",
        skews_ppm=((10.0, -10.0), (-10.0, 10.0)),
        seed=4,
    )
    swapped = replace(scenario, swap_roles=True)
    geometry = build_geometry(scenario, np.random.default_rng(0))
    mirrored = build_geometry(swapped, np.random.default_rng(0))
    assert np.allclose(mirrored.center(0), geometry.center(1))
    assert np.allclose(mirrored.orientations[0], geometry.orientations[1])
    assert swapped.skew(0) == scenario.skew(1)
    direct = run_trials(scenario, 10).records
    reverse = run_trials(swapped, 10).records
    assert (direct["failure"] == "").all() and (reverse["failure"] == "").all()
    difference = np.abs(direct["distance_m"].to_numpy() - reverse["distance_m"].to_numpy())
    assert difference.max() < 2 * 1500 / FS


def test_trial_kind_mismatch():
    """Tests whether pair and group runners reject the other kind of scenario."""
    with pytest.raises(ScenarioError):
        run_trials(SimScenario(diver_distances_m=(7.0,)), 1)
    with pytest.raises(ScenarioError):
        run_round_robin(SimScenario(), 1)
