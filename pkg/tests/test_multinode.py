"""Tests whether the round-robin leader, the divers and ID decoding work as expected."""

import numpy as np
import pandas as pd
import pytest
from aquarange.exceptions import ParameterError
from aquarange.multinode import (
    DiverState,
    LeaderState,
    NodeRole,
    append_round_csv,
    decode_id,
    diver_overhear_distance,
    diver_step,
    leader_round,
    validate_roster,
)
from aquarange.ranging import (
    DistanceOverheard,
    ExchangeCompleted,
    ExchangeFailed,
    PreambleDetected,
    ProtocolConfig,
    RoundCompleted,
    Tick,
    Transmit,
)
from aquarange.waveform import WaveformSpec, build_id_tone

SPEC = WaveformSpec.short()
FS = 44100


def _detection(fine, speaker_index: int = 0, node_id=None) -> PreambleDetected:
    return PreambleDetected(
        coarse_index=int(fine), fine_index=fine, score=0.9, speaker_index=speaker_index, node_id=node_id
    )


def test_decode_clean_tones():
    """Tests whether every clean tone decodes to its own ID."""
    for user_id in range(16):
        assert decode_id(build_id_tone(user_id, SPEC), SPEC) == user_id


def test_decode_shifted_tone():
    """Tests whether a tone shifted by 15 Hz still decodes to its ID."""
    t = np.arange(SPEC.id_tone_len) / FS
    assert decode_id(np.cos(2 * np.pi * (1570 + 15) * t), SPEC) == 2
    assert decode_id(np.cos(2 * np.pi * (1570 - 15) * t), SPEC) == 2


def test_decode_silence():
    """Tests whether silence decodes to no ID."""
    assert decode_id(np.zeros(SPEC.id_tone_len), SPEC) is None
    assert decode_id(np.zeros(100), SPEC) is None


def test_decode_confusion_matrix():
    """Tests whether no ID is confused with another over 1000 windows at 20 dB SNR."""
    rng = np.random.default_rng(0)
    noise_std = np.sqrt(0.5 / 100)
    for trial in range(1000):
        user_id = trial % 16
        window = build_id_tone(user_id, SPEC) + noise_std * rng.standard_normal(SPEC.id_tone_len)
        assert decode_id(window, SPEC) == user_id


def test_overhear_distance():
    """Tests whether the overheard distance follows the leader query timeline."""
    assert diver_overhear_distance(1.0, 1.0, 1500.0) == 0.0
    assert diver_overhear_distance(1.02, 1.0, 1500.0) == pytest.approx(15.0)
    assert diver_overhear_distance(1.02, 1.0, 1500.0, 1e-4, 1e-4) == pytest.approx(15.15)
    assert diver_overhear_distance(0.99, 1.0, 1500.0) is None


def test_roster_validation():
    """Tests whether rosters need exactly one leader and unique IDs."""
    roles = [NodeRole("leader", 0), NodeRole("diver", 1), NodeRole("diver", 2)]
    assert validate_roster(roles) == [1, 2]
    with pytest.raises(ParameterError):
        validate_roster(roles[1:])
    with pytest.raises(ParameterError):
        validate_roster(roles + [NodeRole("diver", 2)])
    with pytest.raises(ParameterError):
        validate_roster(roles + [NodeRole("diver", 3, tau0=1.5)])
    with pytest.raises(ParameterError):
        NodeRole("diver", 16)
    with pytest.raises(ParameterError):
        NodeRole("captain", 1)


def test_empty_roster():
    """Tests whether a leader without divers never transmits."""
    state = LeaderState(ProtocolConfig(), [])
    events = [Tick(mic_index=0, speaker_index=0), Tick(mic_index=10 * FS, speaker_index=10 * FS)]
    assert leader_round(state, events) == []


def test_round_with_silent_diver():
    """Tests whether a silent diver is skipped and the round completes."""
    state = LeaderState(ProtocolConfig(), [1, 2, 3])
    timeout_tick = 179523 + 3 * FS + 1
    events = [
        Tick(mic_index=0, speaker_index=0),
        _detection(1000.0),
        Tick(mic_index=90000, speaker_index=89441),
        _detection(90441.0),
        _detection(90441.0 + FS + 882, speaker_index=140000),
        _detection(179523.0),
        Tick(mic_index=timeout_tick, speaker_index=312000),
        _detection(313000.0),
        _detection(313000.0 + FS + 1200, speaker_index=360000),
    ]
    actions = leader_round(state, events)
    queries = [a for a in actions if isinstance(a, Transmit) and a.kind == "query"]
    assert [query.node_id for query in queries] == [1, 2, 3, 1]
    assert queries[1].speaker_index == 178964
    assert queries[2].speaker_index == 312441
    completed = [a for a in actions if isinstance(a, ExchangeCompleted)]
    assert [c.result.peer_id for c in completed] == [1, 3]
    failed = [a for a in actions if isinstance(a, ExchangeFailed)]
    assert [f.peer_id for f in failed] == [2]
    rounds = [a for a in actions if isinstance(a, RoundCompleted)]
    assert len(rounds) == 1
    assert rounds[0].round_index == 0
    assert rounds[0].unreachable == (2,)
    assert rounds[0].distances[1] == pytest.approx(15.0)
    assert rounds[0].distances[3] == pytest.approx(1500 * 1200 / FS / 2)


def _calibrated_diver(config: ProtocolConfig, overhear_reference: str = "own_mic") -> DiverState:
    state = DiverState(config, node_id=2, overhear_reference=overhear_reference)
    diver_step(Tick(mic_index=0, speaker_index=0), state)
    diver_step(_detection(1000.0), state)
    assert diver_step(_detection(50000.25, speaker_index=55000, node_id=1), state) == []
    reply = diver_step(_detection(50000.25, speaker_index=55000, node_id=2), state)
    assert reply[0].speaker_index == 93541
    assert diver_step(_detection(94100.0), state) == []
    return state


def test_diver_overhears_next_query():
    """Tests whether a diver derives its distance from the next leader query."""
    state = _calibrated_diver(ProtocolConfig())
    actions = diver_step(_detection(94100.0 + FS + 882, node_id=3), state)
    assert len(actions) == 1
    overheard = actions[0]
    assert isinstance(overheard, DistanceOverheard)
    assert overheard.node_id == 2
    assert overheard.t_10 == pytest.approx(1.02)
    assert overheard.distance_m == pytest.approx(15.0)
    assert diver_step(_detection(94100.0 + 3 * FS, node_id=1), state) == []


def test_overhear_references_agree():
    """Tests whether both timing references give the same distance."""
    config = ProtocolConfig(own_delta_s=1e-4)
    distances = []
    for reference in ("own_mic", "emission"):
        state = _calibrated_diver(config, reference)
        actions = diver_step(_detection(94100.0 + FS + 882, node_id=3), state)
        distances.append(actions[0].distance_m)
    assert distances[0] == pytest.approx(distances[1])
    assert distances[0] == pytest.approx(15.075)
    with pytest.raises(ParameterError):
        DiverState(config, node_id=2, overhear_reference="speaker")


def test_round_csv(tmp_path):
    """Tests whether round rows are appended with the documented columns first."""
    path = str(tmp_path / "rounds.csv")
    row = {
        "round": 0,
        "diver_id": 1,
        "leader_distance_m": 7.1,
        "overheard_distance_m": 7.0,
        "true_distance_m": 7.05,
        "session": 0,
    }
    append_round_csv(path, [row])
    append_round_csv(path, [{**row, "round": 1}])
    frame = pd.read_csv(path)
    assert frame.columns.tolist()[:5] == [
        "round",
        "diver_id",
        "leader_distance_m",
        "overheard_distance_m",
        "true_distance_m",
    ]
    assert frame["round"].tolist() == [0, 1]
