"""Device-ID tones appended after the preamble."""

import numpy as np
from typeguard import typechecked
from aquarange.exceptions import ParameterError
from aquarange.waveform.waveform_spec import WaveformSpec


@typechecked
def build_id_tone(user_id: int, spec: WaveformSpec) -> np.ndarray:
    """Returns the unit-amplitude tone at the frequency assigned to `user_id`."""
    if not 0 <= user_id < len(spec.id_tone_table):
        raise ParameterError(
            f"user_id must lie in [0, {len(spec.id_tone_table) - 1}], got {user_id}."
        )
    frequency = spec.id_tone_table[user_id]
    t = np.arange(spec.id_tone_len) / spec.sample_rate_hz
    return np.cos(2 * np.pi * frequency * t)
