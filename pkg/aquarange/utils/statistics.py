"""Summary statistics over ranging errors."""

from typing import Dict, Tuple
import numpy as np
import pandas as pd


def error_statistics(errors: pd.Series) -> Dict[str, float]:
    """Returns count, mean, median, 95th percentile and max of absolute errors.

    Missing values, which mark failed exchanges, are ignored.
    """
    values = pd.Series(errors, dtype=float).dropna().abs()
    if values.empty:
        return {
            "count": 0,
            "mean": float("nan"),
            "median": float("nan"),
            "p95": float("nan"),
            "max": float("nan"),
        }
    return {
        "count": int(values.size),
        "mean": float(values.mean()),
        "median": float(values.median()),
        "p95": float(values.quantile(0.95)),
        "max": float(values.max()),
    }


def empirical_cdf(values: pd.Series) -> Tuple[np.ndarray, np.ndarray]:
    """Returns the sorted values and their cumulative probabilities."""
    ordered = np.sort(pd.Series(values, dtype=float).dropna().to_numpy())
    if ordered.size == 0:
        return ordered, ordered
    probabilities = np.arange(1, ordered.size + 1) / ordered.size
    return ordered, probabilities
