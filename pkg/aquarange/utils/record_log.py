"""Structured debug records written as JSON lines."""

from threading import Lock
from typing import Any, Dict, List
import os
import pandas as pd


class RecordLog:
    """Thread-safe collection of flat debug records."""

    def __init__(self):
        self._records: List[Dict[str, Any]] = []
        self._lock = Lock()

    def add(self, kind: str, **fields: Any):
        """Appends a record of the given kind."""
        with self._lock:
            self._records.append({"kind": kind, **fields})

    def extend(self, other: "RecordLog"):
        """Appends every record of another log."""
        with self._lock:
            self._records.extend(other.records)

    @property
    def records(self) -> List[Dict[str, Any]]:
        return list(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def to_frame(self) -> pd.DataFrame:
        """Returns the records as a DataFrame, one row per record."""
        return pd.DataFrame(self._records)

    def dump(self, path: str):
        """Writes the records as JSON lines."""
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self.to_frame().to_json(path, orient="records", lines=True)
