"""CSV log of per-round, per-diver distances."""

from typing import Any, Dict, Iterable
import os
import pandas as pd

ROUND_COLUMNS = [
    "round",
    "diver_id",
    "leader_distance_m",
    "overheard_distance_m",
    "true_distance_m",
]


def append_round_csv(path: str, rows: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    """Appends round rows to `path`, writing the header on creation."""
    frame = pd.DataFrame(list(rows))
    for column in ROUND_COLUMNS:
        if column not in frame.columns:
            frame[column] = float("nan")
    extra = [column for column in frame.columns if column not in ROUND_COLUMNS]
    frame = frame[ROUND_COLUMNS + extra]
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    exists = os.path.exists(path)
    frame.to_csv(path, mode="a" if exists else "w", header=not exists, index=False)
    return frame
