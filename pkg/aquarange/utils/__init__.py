"""Submodule with utilities shared by the ranging stack."""

from aquarange.utils.tail_power import tail_power
from aquarange.utils.statistics import error_statistics, empirical_cdf
from aquarange.utils.threads import get_thread_count
from aquarange.utils.record_log import RecordLog
from aquarange.utils.logging_setup import setup_logging

__all__ = [
    "tail_power",
    "error_statistics",
    "empirical_cdf",
    "get_thread_count",
    "RecordLog",
    "setup_logging",
]
