"""Submodule synthesizing every transmit-side signal."""

from aquarange.waveform.waveform_spec import WaveformSpec
from aquarange.waveform.zadoff_chu import make_zc_sequence
from aquarange.waveform.preamble import (
    Preamble,
    build_preamble,
    build_calibration_signal,
    base_symbol,
    symbol_spectrum,
)
from aquarange.waveform.id_tone import build_id_tone
from aquarange.waveform.pcm import export_pcm, import_pcm

__all__ = [
    "WaveformSpec",
    "make_zc_sequence",
    "Preamble",
    "build_preamble",
    "build_calibration_signal",
    "base_symbol",
    "symbol_spectrum",
    "build_id_tone",
    "export_pcm",
    "import_pcm",
]
