"""Two-way time of flight and its sensitivity to the delay constants."""

from typing import Dict, Iterable
from typeguard import typechecked
from aquarange.constants import SAMPLE_RATE_HZ
from aquarange.exceptions import InconsistentExchangeError, ParameterError
from aquarange.ranging.ranging_result import RangingResult


@typechecked
def compute_tof(
    t_send: float,
    t_reply: float,
    delta1: float,
    delta2: float,
    tolerance_s: float = 1.0 / SAMPLE_RATE_HZ,
) -> float:
    """Returns (t_send - t_reply + delta1 + delta2) / 2.

    Parameters
    ----------
    t_send : float
        Interval at the sender between its own preamble and the reply.
    t_reply : float
        Interval at the replier between the query and its own reply.
    delta1 : float
        Speaker-to-microphone delay of the sender.
    delta2 : float
        Speaker-to-microphone delay of the replier.
    tolerance_s : float
        Negative results down to minus this value are clamped to zero.

    Raises
    ------
    InconsistentExchangeError
        If the result is negative beyond the tolerance.
    """
    if t_send <= 0:
        raise ParameterError(f"t_send must be positive, got {t_send}.")
    tof = (t_send - t_reply + delta1 + delta2) / 2.0
    if tof < -tolerance_s:
        raise InconsistentExchangeError(
            f"Time of flight {tof:.6e} s is negative beyond the tolerance of {tolerance_s:.2e} s."
        )
    return max(tof, 0.0)


def delta_sensitivity(
    result: RangingResult, delta_errors_s: Iterable[float]
) -> Dict[float, float]:
    """Returns the distance shift of an exchange for each calibration error of delta1 or delta2."""
    shifts = {}
    for error in delta_errors_s:
        tof = (result.t_send - result.t_reply0 + result.delta1 + error + result.delta2) / 2.0
        shifts[float(error)] = result.sound_speed * tof - result.distance_m
    return shifts
