"""Monte-Carlo trials, round-robin groups and tracking over simulated sessions."""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple
import logging
import numpy as np
import pandas as pd
from aquarange.exceptions import ScenarioError
from aquarange.hydrosim.engine import ExchangeRecord, SessionOutcome, run_sessions
from aquarange.hydrosim.scenario import SimScenario
from aquarange.ranging import RangingResult
from aquarange.utils import RecordLog, empirical_cdf, error_statistics

logger = logging.getLogger(__name__)

MISSED_DETECTIONS = ("own preamble missed", "reply timeout")


@dataclass
class TrialReport:
    """Per-exchange records of a scenario and their error statistics."""

    scenario: SimScenario
    records: pd.DataFrame
    results: List[RangingResult] = field(default_factory=list, repr=False)
    debug: RecordLog = field(default_factory=RecordLog, repr=False)

    @property
    def statistics(self) -> Dict[str, float]:
        """Error statistics plus detection and success rates."""
        errors = self.records["error_m"] if not self.records.empty else pd.Series(dtype=float)
        statistics = error_statistics(errors)
        total = len(self.records)
        if total:
            failures = self.records["failure"].fillna("")
            statistics["detection_rate"] = float((~failures.isin(MISSED_DETECTIONS)).mean())
            statistics["success_rate"] = float((failures == "").mean())
        else:
            statistics["detection_rate"] = float("nan")
            statistics["success_rate"] = float("nan")
        statistics["exchanges"] = total
        return statistics

    @property
    def cdf(self) -> Tuple[np.ndarray, np.ndarray]:
        """Empirical CDF of the absolute errors."""
        if self.records.empty:
            return np.zeros(0), np.zeros(0)
        return empirical_cdf(self.records["error_m"].abs())

    def summary_row(self) -> Dict[str, Any]:
        scenario = self.scenario
        return {
            "scenario": scenario.name,
            "distance_m": scenario.distance_m,
            "profile": scenario.profile,
            "mic_mode": scenario.mic_mode,
            "preamble": scenario.preamble,
            **self.statistics,
        }


def _records_frame(exchanges: List[ExchangeRecord]) -> pd.DataFrame:
    columns = list(ExchangeRecord.__dataclass_fields__)
    columns.remove("result")
    return pd.DataFrame([record.to_dict() for record in exchanges], columns=columns)


def _report(scenario: SimScenario, outcomes: List[SessionOutcome], limit: int) -> TrialReport:
    exchanges = [record for outcome in outcomes for record in outcome.exchanges][:limit]
    debug = RecordLog()
    for outcome in outcomes:
        debug.extend(outcome.records)
    if len(exchanges) < limit:
        logger.warning(
            "Scenario %s produced %d of %d exchanges.", scenario.name, len(exchanges), limit
        )
    return TrialReport(
        scenario=scenario,
        records=_records_frame(exchanges),
        results=[record.result for record in exchanges if record.result is not None],
        debug=debug,
    )


def run_trials(
    scenario: SimScenario, n: int, threads: int = 1, progress: bool = False
) -> TrialReport:
    """Runs `n` exchanges, grouped in sessions with fresh buffer offsets."""
    if scenario.is_group:
        raise ScenarioError(f"Scenario {scenario.name} describes a group; use run_round_robin.")
    return _report(scenario, run_sessions(scenario, n, threads, progress), n)


def run_exchange(scenario: SimScenario) -> Optional[RangingResult]:
    """Runs a single exchange, returning None when it failed."""
    report = run_trials(scenario, 1)
    return report.results[0] if report.results else None


def run_track(
    scenario: SimScenario, duration_s: Optional[float] = None, progress: bool = False
) -> TrialReport:
    """Ranges a replier moving along the scenario track, one estimate per period.

    Errors are taken against the true path at the time of each exchange.
    """
    if duration_s is None:
        if not scenario.track:
            raise ScenarioError(f"Scenario {scenario.name} has no track and no duration.")
        duration_s = scenario.track[-1][0]
    count = max(int(duration_s // scenario.period_s), 0)
    outcomes = run_sessions(scenario, count, threads=1, progress=progress, single_session=True)
    return _report(scenario, outcomes, count)


@dataclass
class RoundRobinReport:
    """Per-round, per-diver distances from the leader and from overhearing."""

    scenario: SimScenario
    rounds: pd.DataFrame
    exchanges: pd.DataFrame

    def per_diver(self) -> pd.DataFrame:
        """Median absolute error of both estimates for each diver."""
        if self.rounds.empty:
            return pd.DataFrame()
        frame = self.rounds.assign(
            leader_error_m=(self.rounds["leader_distance_m"] - self.rounds["true_distance_m"]).abs(),
            overheard_error_m=(
                self.rounds["overheard_distance_m"] - self.rounds["true_distance_m"]
            ).abs(),
        )
        return frame.groupby("diver_id")[["leader_error_m", "overheard_error_m"]].median()

    def summary_rows(self) -> List[Dict[str, Any]]:
        """One summary row per diver: leader error statistics plus overheard ones."""
        scenario = self.scenario
        rows = []
        for diver_id, distance_m in enumerate(scenario.diver_distances_m, start=1):
            if self.rounds.empty:
                rounds = pd.DataFrame(columns=["leader_distance_m", "overheard_distance_m", "true_distance_m"])
            else:
                rounds = self.rounds[self.rounds["diver_id"] == diver_id]
            leader = error_statistics(rounds["leader_distance_m"] - rounds["true_distance_m"])
            overheard = error_statistics(rounds["overheard_distance_m"] - rounds["true_distance_m"])
            exchanges = (
                self.exchanges[self.exchanges["replier"] == diver_id]
                if not self.exchanges.empty
                else self.exchanges
            )
            rows.append(
                {
                    "scenario": scenario.name,
                    "diver_id": diver_id,
                    "distance_m": distance_m,
                    "profile": scenario.profile,
                    "mic_mode": scenario.mic_mode,
                    "preamble": scenario.preamble,
                    **leader,
                    "success_rate": (
                        float((exchanges["failure"].fillna("") == "").mean())
                        if len(exchanges)
                        else float("nan")
                    ),
                    "overheard_count": overheard["count"],
                    "overheard_median": overheard["median"],
                    "overheard_p95": overheard["p95"],
                }
            )
        return rows


def run_round_robin(
    scenario: SimScenario, rounds: int, threads: int = 1, progress: bool = False
) -> RoundRobinReport:
    """Runs `rounds` leader rounds over every diver of the scenario."""
    if not scenario.is_group:
        raise ScenarioError(f"Scenario {scenario.name} lists no divers.")
    outcomes = run_sessions(scenario, rounds, threads, progress)
    rows = [row for outcome in outcomes for row in outcome.rounds]
    exchanges = [record for outcome in outcomes for record in outcome.exchanges]
    return RoundRobinReport(
        scenario=scenario,
        rounds=pd.DataFrame(rows),
        exchanges=_records_frame(exchanges),
    )


def compare_mic_modes(
    scenario: SimScenario, n: int, threads: int = 1
) -> Dict[str, TrialReport]:
    """Runs the same trials with both microphones and with each one alone."""
    return {
        mode: run_trials(replace(scenario, mic_mode=mode), n, threads)
        for mode in ("dual", "bottom", "top")
    }
