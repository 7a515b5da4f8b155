"""Export and import of waveforms as raw 16-bit PCM with a JSON sidecar."""

from typing import Any, Dict, Optional, Tuple
import os
import numpy as np
import compress_json
from aquarange.waveform.preamble import Preamble
from aquarange.waveform.waveform_spec import WaveformSpec

PCM_SCALE = 32767.0


def sidecar_path(path: str) -> str:
    """Returns the path of the metadata file accompanying a PCM file."""
    return f"{path}.json"


def export_pcm(
    path: str,
    samples: np.ndarray,
    spec: WaveformSpec,
    preamble: Optional[Preamble] = None,
) -> str:
    """Writes mono s16le samples to `path` and their metadata next to it."""
    pcm = np.round(np.clip(samples, -1.0, 1.0) * PCM_SCALE).astype("<i2")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    pcm.tofile(path)
    metadata: Dict[str, Any] = {
        "format": "s16le",
        "channels": 1,
        "sample_rate_hz": spec.sample_rate_hz,
        "number_of_samples": int(pcm.size),
        "spec": spec.to_dict(),
    }
    if preamble is not None:
        metadata["symbol_starts"] = list(preamble.symbol_starts)
        metadata["total_len"] = preamble.total_len
    compress_json.dump(metadata, sidecar_path(path))
    return path


def import_pcm(path: str) -> Tuple[np.ndarray, Dict[str, Any]]:
    """Reads a PCM file written by `export_pcm`, returning samples in [-1, 1]."""
    samples = np.fromfile(path, dtype="<i2").astype(np.float64) / PCM_SCALE
    try:
        metadata = compress_json.load(sidecar_path(path))
    except FileNotFoundError:
        metadata = {}
    return samples, metadata
