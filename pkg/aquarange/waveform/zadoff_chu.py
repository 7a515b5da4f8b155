"""Zadoff-Chu sequence generation."""

from math import gcd
import numpy as np
from typeguard import typechecked
from aquarange.exceptions import ParameterError


@typechecked
def make_zc_sequence(length: int, root: int) -> np.ndarray:
    """Returns the unit-magnitude ZC sequence exp(-j pi root k (k+1) / length).

    Parameters
    ----------
    length : int
        Odd length of the sequence.
    root : int
        Root index, coprime with `length`.
    """
    if length <= 0 or length % 2 == 0:
        raise ParameterError(f"ZC length must be a positive odd integer, got {length}.")
    if gcd(root, length) != 1:
        raise ParameterError(f"ZC root {root} is not coprime with length {length}.")
    k = np.arange(length, dtype=np.float64)
    # Reducing the phase argument modulo 2*length keeps it exact for long sequences.
    phase_index = np.mod(root * k * (k + 1), 2 * length)
    return np.exp(-1j * np.pi * phase_index / length)
