"""Direct-path search over the channel estimates of the two microphones."""

from typing import Any, Dict, List, Optional, Tuple
import numpy as np
from aquarange.dualmic.params import DualMicParams
from aquarange.dualmic.peaks import peak_mask
from aquarange.exceptions import ParameterError

TapPair = Tuple[int, int]


def qualifying_taps(taps: np.ndarray, floor: float, lambda_margin: float) -> np.ndarray:
    """Returns the ascending indices of peaks rising above `floor + lambda_margin`."""
    values = np.asarray(taps)
    return np.flatnonzero(peak_mask(values) & (values > floor + lambda_margin))


def _qualifying_pair(h1, h2, params: DualMicParams) -> Tuple[np.ndarray, np.ndarray]:
    if len(h1.taps) != len(h2.taps):
        raise ParameterError(
            f"Estimates differ in length: {len(h1.taps)} and {len(h2.taps)} taps."
        )
    return (
        qualifying_taps(h1.taps, h1.noise_floor, params.lambda_margin),
        qualifying_taps(h2.taps, h2.noise_floor, params.lambda_margin),
    )


def find_direct_pair(h1, h2, params: DualMicParams) -> Optional[TapPair]:
    """Returns the qualifying pair (n, m), |n - m| <= W, of minimum n + m.

    Ties are broken by smaller |n - m| and then by smaller n. Candidates
    are scanned in increasing n, and the scan stops once no later n can
    reach a sum at or below the best one found.
    """
    first, second = _qualifying_pair(h1, h2, params)
    window = params.max_tap_window
    best: Optional[Tuple[int, int, int]] = None
    best_pair: Optional[TapPair] = None
    for n in first.tolist():
        if best is not None and 2 * n - window > best[0]:
            break
        position = int(np.searchsorted(second, n - window, side="left"))
        if position == second.size or second[position] > n + window:
            continue
        m = int(second[position])
        key = (n + m, abs(n - m), n)
        if best is None or key < best:
            best, best_pair = key, (n, m)
    return best_pair


def find_direct_path(h1, h2, params: DualMicParams) -> Optional[float]:
    """Returns the midpoint (n + m) / 2 of the direct-path pair, or None."""
    pair = find_direct_pair(h1, h2, params)
    if pair is None:
        return None
    return (pair[0] + pair[1]) / 2.0


def brute_force_direct_path(h1, h2, params: DualMicParams) -> Optional[float]:
    """Exhaustive reference for `find_direct_path` over every pair of taps."""
    first, second = _qualifying_pair(h1, h2, params)
    length = len(h1.taps)
    grid_first = np.zeros(length, dtype=bool)
    grid_second = np.zeros(length, dtype=bool)
    grid_first[first] = True
    grid_second[second] = True
    indices = np.arange(length)
    mask = (
        grid_first[:, None]
        & grid_second[None, :]
        & (np.abs(indices[:, None] - indices[None, :]) <= params.max_tap_window)
    )
    n, m = np.nonzero(mask)
    if n.size == 0:
        return None
    best = np.lexsort((n, np.abs(n - m), n + m))[0]
    return (int(n[best]) + int(m[best])) / 2.0


def find_first_peak(h, params: DualMicParams) -> Optional[int]:
    """Returns the earliest qualifying peak of a single estimate, or None."""
    candidates = qualifying_taps(h.taps, h.noise_floor, params.lambda_margin)
    if candidates.size == 0:
        return None
    return int(candidates[0])


def candidate_table(h1, h2, params: DualMicParams) -> List[Dict[str, Any]]:
    """Returns every qualifying pair within the tap window, for debug records."""
    first, second = _qualifying_pair(h1, h2, params)
    rows = []
    for n in first.tolist():
        for m in second.tolist():
            if abs(n - m) <= params.max_tap_window:
                rows.append(
                    {"n": n, "m": m, "h1": float(h1.taps[n]), "h2": float(h2.taps[m])}
                )
    return rows


def refine_arrival(coarse_index: int, tau_los: float, reference_tap: int = 0) -> float:
    """Returns the fine arrival index: coarse index plus direct-path tap offset."""
    return coarse_index + tau_los - reference_tap
