"""Thread count for parallel Monte-Carlo sessions."""

import os
from aquarange.constants import THREADS_ENV_VAR
from aquarange.exceptions import ParameterError


def get_thread_count() -> int:
    """Returns the worker count from the environment, defaulting to the CPU count."""
    value = os.environ.get(THREADS_ENV_VAR)
    if value is None:
        return max(1, os.cpu_count() or 1)
    try:
        threads = int(value)
    except ValueError as error:
        raise ParameterError(
            f"{THREADS_ENV_VAR} must be a positive integer, got '{value}'."
        ) from error
    if threads <= 0:
        raise ParameterError(f"{THREADS_ENV_VAR} must be a positive integer, got {threads}.")
    return threads
