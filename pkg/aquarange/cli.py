"""CLI for the aquarange simulator."""

from argparse import Namespace, ArgumentParser
from dataclasses import replace
from typing import List, Optional, Sequence
from time import time
import logging
import os
import pandas as pd
from rich.console import Console
from rich.table import Table
from humanize import precisedelta
from aquarange.__version__ import __version__
from aquarange.constants import BUFFER_SECONDS
from aquarange.exceptions import AquarangeError, ParameterError
from aquarange.hydrosim import (
    SimScenario,
    TrialReport,
    load_scenarios,
    run_round_robin,
    run_track,
    run_trials,
)
from aquarange.multinode import append_round_csv
from aquarange.ranging import MediumConfig, append_results_csv
from aquarange.receiver import benchmark_receiver
from aquarange.utils import get_thread_count, setup_logging
from aquarange.waveform import WaveformSpec, build_preamble, export_pcm

logger = logging.getLogger(__name__)


def _apply_overrides(scenario: SimScenario, namespace: Namespace) -> SimScenario:
    overrides = {}
    if getattr(namespace, "seed", None) is not None:
        overrides["seed"] = namespace.seed
    if getattr(namespace, "profile", None) is not None:
        overrides["profile"] = namespace.profile
    if getattr(namespace, "preamble", None) is not None:
        overrides["preamble"] = namespace.preamble
    if getattr(namespace, "mic_mode", None) is not None:
        overrides["mic_mode"] = namespace.mic_mode
    if getattr(namespace, "speed_model", None) is not None:
        medium = scenario.medium.to_dict()
        medium["model"] = namespace.speed_model
        overrides["medium"] = MediumConfig.from_dict(medium)
    return replace(scenario, **overrides) if overrides else scenario


def _fresh(path: str) -> str:
    if os.path.exists(path):
        os.remove(path)
    return path


def _print_summary(console: Console, summary: pd.DataFrame, title: str):
    table = Table(title=title)
    for column in summary.columns:
        table.add_column(str(column))
    for _, row in summary.iterrows():
        table.add_row(
            *[f"{value:.3f}" if isinstance(value, float) else str(value) for value in row]
        )
    console.print(table)


def run(namespace: Namespace) -> int:
    """Runs every scenario of a file and writes results and summaries."""
    start = time()
    console = Console()
    threads = get_thread_count()
    scenarios = [_apply_overrides(s, namespace) for s in load_scenarios(namespace.scenario_file)]
    os.makedirs(namespace.out, exist_ok=True)
    ranging_log = _fresh(os.path.join(namespace.out, "ranging.csv"))
    rounds_log = _fresh(os.path.join(namespace.out, "rounds.csv"))
    frames: List[pd.DataFrame] = []
    summaries = []
    reports: List[TrialReport] = []
    for scenario in scenarios:
        if scenario.is_group:
            group = run_round_robin(scenario, namespace.trials, threads, namespace.verbose)
            if not group.rounds.empty:
                append_round_csv(rounds_log, group.rounds.assign(scenario=scenario.name).to_dict("records"))
            frames.append(group.exchanges.assign(scenario=scenario.name))
            summaries.extend(group.summary_rows())
            continue
        report = run_trials(scenario, namespace.trials, threads, namespace.verbose)
        reports.append(report)
        if report.results:
            append_results_csv(ranging_log, report.results)
        frames.append(report.records.assign(scenario=scenario.name))
        summaries.append(report.summary_row())
        if namespace.debug_records:
            report.debug.dump(os.path.join(namespace.out, f"{scenario.name}.debug.jsonl"))
    results = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()
    results.to_csv(os.path.join(namespace.out, "results.csv"), index=False)
    summary = pd.DataFrame(summaries)
    summary.to_csv(os.path.join(namespace.out, "summary.csv"), index=False)
    if namespace.plots:
        from aquarange.plots import plot_channel_profiles, plot_error_cdfs

        plot_error_cdfs(reports, os.path.join(namespace.out, "error_cdf.svg"))
        for scenario in scenarios[:1]:
            plot_channel_profiles(scenario, os.path.join(namespace.out, "channel_profiles.svg"))
    if not summary.empty:
        _print_summary(console, summary[["scenario", "count", "median", "p95", "success_rate"]], "Ranging errors (m)")
    logger.info("Completed %d scenarios in %s.", len(scenarios), precisedelta(int(time() - start)))
    return 0


def run_parser(parser: ArgumentParser):
    """Add arguments to the run parser."""
    parser.add_argument("scenario_file", type=str, help="Path to the JSON scenario file.")
    parser.add_argument("--trials", type=int, default=60, help="Exchanges per scenario.")
    parser.add_argument("--seed", type=int, default=None, help="Overrides the scenario seeds.")
    parser.add_argument("--out", type=str, default="results", help="Output directory.")
    parser.add_argument("--profile", type=str, default=None, help="Overrides the channel preset.")
    parser.add_argument("--preamble", choices=("short", "long"), default=None, help="Preamble preset.")
    parser.add_argument("--speed-model", choices=("fixed", "wilson"), default=None, help="Sound speed model.")
    parser.add_argument("--mic-mode", choices=("dual", "bottom", "top"), default=None, help="Microphones used.")
    parser.add_argument("--plots", action="store_true", help="Writes SVG figures.")
    parser.add_argument("--debug-records", action="store_true", help="Writes JSON-lines debug records.")
    parser.add_argument("--verbose", action="store_true", help="Prints progress and debug logs.")
    parser.set_defaults(func=run)


def bench(namespace: Namespace) -> int:
    """Times the receiver stages on one buffer."""
    spec = WaveformSpec.from_preset(namespace.preamble)
    timings = benchmark_receiver(
        spec,
        runs=namespace.runs,
        buffer_seconds=namespace.buffer_ms / 1000.0,
        seed=namespace.seed,
        verbose=namespace.verbose,
    )
    table = Table(title=f"Runtime over a {namespace.buffer_ms:g} ms buffer ({namespace.runs} runs)")
    table.add_column("Stage")
    table.add_column("Runtime (ms)")
    for stage, (mean, std) in timings.items():
        table.add_row(stage.replace("_", " ").capitalize(), f"{mean:.1f} ± {std:.1f}")
    total = sum(mean for mean, _ in timings.values())
    table.add_row("Total", f"{total:.1f}")
    Console().print(table)
    return 0


def bench_parser(parser: ArgumentParser):
    """Add arguments to the bench parser."""
    parser.add_argument("--buffer-ms", type=float, default=BUFFER_SECONDS * 1000, help="Buffer length.")
    parser.add_argument("--runs", type=int, default=100, help="Number of timed runs.")
    parser.add_argument("--preamble", choices=("short", "long"), default="short", help="Preamble preset.")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the synthetic buffers.")
    parser.add_argument("--verbose", action="store_true", help="Prints progress.")
    parser.set_defaults(func=bench)


def track(namespace: Namespace) -> int:
    """Ranges a moving replier and writes its trajectory."""
    scenarios = [_apply_overrides(s, namespace) for s in load_scenarios(namespace.scenario_file)]
    os.makedirs(namespace.out, exist_ok=True)
    frames = []
    for scenario in scenarios:
        report = run_track(scenario, namespace.duration, progress=namespace.verbose)
        frames.append(report.records.assign(scenario=scenario.name))
        if namespace.plots:
            from aquarange.plots import plot_trajectory

            plot_trajectory(report, os.path.join(namespace.out, f"{scenario.name}.trajectory.svg"))
        statistics = report.statistics
        logger.info(
            "%s: median error %.3f m over %d estimates.",
            scenario.name,
            statistics["median"],
            statistics["count"],
        )
    trajectory = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()
    trajectory.to_csv(os.path.join(namespace.out, "trajectory.csv"), index=False)
    return 0


def track_parser(parser: ArgumentParser):
    """Add arguments to the track parser."""
    parser.add_argument("scenario_file", type=str, help="Path to a scenario file with a track.")
    parser.add_argument("--duration", type=float, default=None, help="Seconds to simulate.")
    parser.add_argument("--seed", type=int, default=None, help="Overrides the scenario seeds.")
    parser.add_argument("--out", type=str, default="results", help="Output directory.")
    parser.add_argument("--profile", type=str, default=None, help="Overrides the channel preset.")
    parser.add_argument("--plots", action="store_true", help="Writes SVG figures.")
    parser.add_argument("--verbose", action="store_true", help="Prints progress and debug logs.")
    parser.set_defaults(func=track)


def export(namespace: Namespace) -> int:
    """Writes the preamble as 16-bit PCM."""
    spec = WaveformSpec.from_preset(namespace.preamble)
    preamble = build_preamble(spec)
    export_pcm(namespace.output, preamble.samples, spec, preamble)
    logger.info("Wrote %d samples to %s.", preamble.total_len, namespace.output)
    return 0


def export_parser(parser: ArgumentParser):
    """Add arguments to the export parser."""
    parser.add_argument("output", type=str, help="Path of the PCM file.")
    parser.add_argument("--preamble", choices=("short", "long"), default="short", help="Preamble preset.")
    parser.set_defaults(func=export)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI for the aquarange simulator."""
    parser = ArgumentParser(description=f"Smartphone underwater ranging simulator v{__version__}.")

    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    run_parser(subparsers.add_parser("run"))
    bench_parser(subparsers.add_parser("bench"))
    track_parser(subparsers.add_parser("track"))
    export_parser(subparsers.add_parser("export"))

    args = parser.parse_args(argv)
    setup_logging(getattr(args, "verbose", False))

    try:
        return args.func(args)
    except ParameterError as error:
        logger.error("Configuration error: %s", error)
        return 2
    except AquarangeError as error:
        logger.error("Runtime failure: %s", error)
        return 3
    except Exception:  # noqa: BLE001
        logger.exception("Unexpected failure.")
        return 3
