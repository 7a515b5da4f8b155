"""Transmit-side parameters shared by every waveform of the ranging stack."""

from dataclasses import dataclass, asdict
from math import gcd
from typing import Any, Dict, Tuple
import numpy as np
from aquarange.constants import (
    SAMPLE_RATE_HZ,
    BAND_LOW_HZ,
    BAND_HIGH_HZ,
    SHORT_FFT_SIZE,
    SHORT_CP_LEN,
    LONG_FFT_SIZE,
    LONG_CP_LEN,
    PN_SIGNS,
    NUMBER_OF_SYMBOLS,
    ZC_ROOT,
    EDGE_TAPER,
    ID_TONE_TABLE,
    ID_TONE_SECONDS,
    ID_TONE_SPACING_HZ,
)
from aquarange.exceptions import ParameterError


@dataclass(frozen=True)
class WaveformSpec:
    """All transmit-side parameters: band, FFT size, CP, PN signs and ID tones."""

    sample_rate_hz: int = SAMPLE_RATE_HZ
    band_low_hz: float = BAND_LOW_HZ
    band_high_hz: float = BAND_HIGH_HZ
    fft_size: int = SHORT_FFT_SIZE
    cp_len: int = SHORT_CP_LEN
    pn_signs: Tuple[int, ...] = PN_SIGNS
    zc_root: int = ZC_ROOT
    id_tone_table: Tuple[float, ...] = ID_TONE_TABLE
    id_tone_len: int = int(round(ID_TONE_SECONDS * SAMPLE_RATE_HZ))
    edge_taper: float = EDGE_TAPER

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ParameterError(
                f"sample_rate_hz must be positive, got {self.sample_rate_hz}."
            )
        if not 0 <= self.band_low_hz < self.band_high_hz < self.sample_rate_hz / 2:
            raise ParameterError(
                "band_low_hz < band_high_hz < sample_rate_hz / 2 does not hold: "
                f"got band [{self.band_low_hz}, {self.band_high_hz}] "
                f"at {self.sample_rate_hz} Hz."
            )
        if self.fft_size <= 0:
            raise ParameterError(f"fft_size must be positive, got {self.fft_size}.")
        if not 0 <= self.cp_len < self.fft_size:
            raise ParameterError(
                f"cp_len must lie in [0, fft_size), got {self.cp_len}."
            )
        if len(self.pn_signs) != NUMBER_OF_SYMBOLS:
            raise ParameterError(
                f"pn_signs must have exactly {NUMBER_OF_SYMBOLS} entries, "
                f"got {len(self.pn_signs)}."
            )
        if any(sign not in (-1, 1) for sign in self.pn_signs):
            raise ParameterError(f"pn_signs entries must be -1 or +1, got {self.pn_signs}.")
        spacing = np.diff(np.asarray(self.id_tone_table, dtype=float))
        if len(self.id_tone_table) == 0 or np.any(spacing < ID_TONE_SPACING_HZ - 1e-9):
            raise ParameterError(
                "id_tone_table must be strictly increasing with spacing of at least "
                f"{ID_TONE_SPACING_HZ} Hz."
            )
        if self.id_tone_len <= 0:
            raise ParameterError(f"id_tone_len must be positive, got {self.id_tone_len}.")
        if not 0.0 <= self.edge_taper <= 1.0:
            raise ParameterError(f"edge_taper must lie in [0, 1], got {self.edge_taper}.")
        if self.zc_length > 0 and gcd(self.zc_root, self.zc_length) != 1:
            raise ParameterError(
                f"zc_root {self.zc_root} is not coprime with the ZC length {self.zc_length}."
            )

    @property
    def symbol_len(self) -> int:
        """Length of one OFDM symbol including its cyclic prefix."""
        return self.fft_size + self.cp_len

    @property
    def total_len(self) -> int:
        """Length of the full preamble in samples."""
        return NUMBER_OF_SYMBOLS * self.symbol_len

    @property
    def duration_s(self) -> float:
        """Duration of the full preamble in seconds."""
        return self.total_len / self.sample_rate_hz

    @property
    def bin_spacing_hz(self) -> float:
        """Frequency spacing of the FFT bins."""
        return self.sample_rate_hz / self.fft_size

    @property
    def active_bins(self) -> np.ndarray:
        """FFT bins whose center frequency lies in the band."""
        first = int(np.ceil(self.band_low_hz / self.bin_spacing_hz - 1e-9))
        last = int(np.floor(self.band_high_hz / self.bin_spacing_hz + 1e-9))
        last = min(last, self.fft_size // 2 - 1)
        first = max(first, 1)
        if last < first:
            return np.zeros(0, dtype=int)
        return np.arange(first, last + 1)

    @property
    def zc_length(self) -> int:
        """Largest odd number not exceeding the active-bin count."""
        count = int(self.active_bins.size)
        if count == 0:
            return 0
        return count if count % 2 == 1 else count - 1

    @property
    def pilot_bins(self) -> np.ndarray:
        """Active bins carrying ZC values; leftover bins stay empty."""
        return self.active_bins[: self.zc_length]

    @classmethod
    def short(cls, **overrides: Any) -> "WaveformSpec":
        """The 316 ms preamble."""
        return cls(fft_size=SHORT_FFT_SIZE, cp_len=SHORT_CP_LEN, **overrides)

    @classmethod
    def long(cls, **overrides: Any) -> "WaveformSpec":
        """The 479 ms preamble."""
        return cls(fft_size=LONG_FFT_SIZE, cp_len=LONG_CP_LEN, **overrides)

    @classmethod
    def from_preset(cls, name: str) -> "WaveformSpec":
        """Returns the named preset, either 'short' or 'long'."""
        if name == "short":
            return cls.short()
        if name == "long":
            return cls.long()
        raise ParameterError(f"Unknown preamble preset '{name}', expected 'short' or 'long'.")

    def to_dict(self) -> Dict[str, Any]:
        """Returns the waveform parameters as a JSON-friendly dictionary."""
        data = asdict(self)
        data["pn_signs"] = list(self.pn_signs)
        data["id_tone_table"] = list(self.id_tone_table)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WaveformSpec":
        """Builds a spec from a dictionary, as written by `to_dict`."""
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ParameterError(f"Unknown waveform fields: {', '.join(unknown)}.")
        values = dict(data)
        if "pn_signs" in values:
            values["pn_signs"] = tuple(int(sign) for sign in values["pn_signs"])
        if "id_tone_table" in values:
            values["id_tone_table"] = tuple(float(f) for f in values["id_tone_table"])
        return cls(**values)
