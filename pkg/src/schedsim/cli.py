"""Command-line front end.

Subcommands:
    simulate        replay a trace under one policy, write metrics + figures
    workflow        execute a workflow JSON document
    sweep           run all five policies on one trace and compare them
    validate-trace  parse a trace permissively and report problems
    gen-dag         emit a seeded synthetic workflow document

Exit codes: 0 success, 1 runtime failure (message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .engine import SimulationConfig, SimulationResult, run_batch, run_workflow
from .errors import SchedSimError
from .metrics import export_metrics, summarize, wait_cdf
from .policies import Policy
from .workflow import generate_workflow, load_workflow_file
from .workload import TRACE_PROFILES, load_workload, scan_trace_lines

POLICY_ORDER = [Policy.FCFS, Policy.BACKFILL, Policy.BEST_FIT, Policy.SJF, Policy.LJF]


class UsageError(SchedSimError):
    """Invalid invocation discovered after argument parsing."""


def _print_summary(result: SimulationResult, label: str = "") -> None:
    stats = summarize(result.records, result.total_cores)
    prefix = f"[{label}] " if label else ""
    print(f"{prefix}jobs:        {stats.jobs}")
    print(f"{prefix}mean wait:   {stats.mean_wait:.2f} s")
    print(f"{prefix}median wait: {stats.median_wait:.2f} s")
    print(f"{prefix}max wait:    {stats.max_wait} s")
    print(f"{prefix}makespan:    {stats.makespan} s")
    print(f"{prefix}utilization: {stats.utilization:.4f}")
    if result.truncated:
        print(f"{prefix}truncated at t={result.final_time}; unfinished: {len(result.unfinished)}")


def _write_artifacts(result: SimulationResult, out_dir: Path, fmt: str, plot: bool) -> None:
    export_metrics(result.records, result.total_cores, out_dir, fmt=fmt)
    if not plot:
        return
    from . import plotting
    from .metrics import occupied_series, running_jobs_series

    plotting.plot_occupied(
        occupied_series(result.records, result.total_cores), result.total_cores,
        out_dir / "occupied.png",
    )
    plotting.plot_running(running_jobs_series(result.records), out_dir / "running.png")
    curves = {}
    if result.records:
        curves["simulated"] = wait_cdf(result.records)
        recorded = [r.recorded_wait for r in result.records if r.recorded_wait is not None]
        if recorded:
            n = len(recorded)
            points = []
            for i, wait in enumerate(sorted(recorded)):
                points.append((wait, (i + 1) / n))
            curves["trace record"] = points
    plotting.plot_wait_cdf(curves, out_dir / "wait_cdf.png")


def _resolve_cores(args, workload) -> int:
    if args.cores is not None:
        return args.cores
    if workload.machine_cores > 0:
        return workload.machine_cores
    raise UsageError(
        "--cores is required: the trace has no machine-size header (MaxProcs)"
    )


def _cmd_simulate(args) -> int:
    workload = load_workload(args.input, args.format)
    cores = _resolve_cores(args, workload)
    config = SimulationConfig(
        policy=Policy(args.policy),
        total_cores=cores,
        total_memory=args.memory,
        workload=workload,
        stop_time=args.stop_time,
    )
    result = run_batch(config)
    _write_artifacts(result, Path(args.out), args.export_format, not args.no_plot)
    _print_summary(result)
    return 0


def _cmd_workflow(args) -> int:
    spec = load_workflow_file(args.input)
    config = SimulationConfig(
        workflow=spec,
        stop_time=args.stop_time,
        workflow_cpu=args.cpu,
        workflow_memory=args.memory,
    )
    result = run_workflow(config)
    _write_artifacts(result, Path(args.out), args.export_format, not args.no_plot)
    print(f"workflow:    {spec.workflow_id}")
    print(f"tasks:       {len(spec.tasks)}")
    _print_summary(result)
    return 0


def _cmd_sweep(args) -> int:
    workload = load_workload(args.input, args.format)
    cores = _resolve_cores(args, workload)
    out = Path(args.out)
    failures = []
    stats_by_policy = {}
    curves = {}
    for policy in POLICY_ORDER:
        config = SimulationConfig(
            policy=policy,
            total_cores=cores,
            total_memory=args.memory,
            workload=workload,
            record_events=False,
        )
        try:
            result = run_batch(config)
        except SchedSimError as exc:
            failures.append(f"policy {policy.value}: {exc}")
            continue
        export_metrics(result.records, cores, out / policy.value, fmt=args.export_format)
        stats_by_policy[policy.value] = summarize(result.records, cores)
        if result.records:
            curves[policy.value] = wait_cdf(result.records)
    if failures:
        for line in failures:
            print(line, file=sys.stderr)
        return 1

    rows = [
        [name, stats.jobs, repr(stats.mean_wait), repr(stats.median_wait),
         stats.max_wait, stats.makespan, repr(stats.utilization)]
        for name, stats in stats_by_policy.items()
    ]
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "comparison.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["policy", "jobs", "mean_wait", "median_wait", "max_wait", "makespan", "utilization"])
        writer.writerows(rows)

    print(f"{'policy':<10} {'mean wait':>12} {'median':>10} {'max':>8} {'makespan':>10} {'util':>8}")
    for name, stats in stats_by_policy.items():
        print(
            f"{name:<10} {stats.mean_wait:>12.2f} {stats.median_wait:>10.2f}"
            f" {stats.max_wait:>8} {stats.makespan:>10} {stats.utilization:>8.4f}"
        )
    if not args.no_plot:
        from . import plotting

        plotting.plot_mean_waits(
            {name: stats.mean_wait for name, stats in stats_by_policy.items()},
            out / "comparison.png",
        )
        plotting.plot_wait_cdf(curves, out / "wait_cdf.png")
    return 0


def _cmd_validate_trace(args) -> int:
    with open(args.input, "r", encoding="utf-8", errors="replace") as handle:
        scan = scan_trace_lines(handle, args.format)
    print(f"jobs: {len(scan.jobs)}")
    if scan.machine_cores:
        print(f"machine cores (header): {scan.machine_cores}")
    if scan.fractional_lines:
        print(f"fractional times rounded down on {len(scan.fractional_lines)} line(s)")
    print(f"errors: {len(scan.problems)}")
    for line_no, reason in scan.problems:
        print(f"  line {line_no}: {reason}")
    return 1 if scan.problems else 0


def _cmd_gen_dag(args) -> int:
    doc = generate_workflow(
        kind=args.kind,
        num_tasks=args.tasks,
        seed=args.seed,
        max_execution_time=args.max_execution_time,
        max_cpu=args.max_cpu,
        max_memory=args.max_memory,
    )
    path = Path(args.out)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {args.tasks}-task {args.kind} workflow to {path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schedsim",
        description="Discrete-event simulator for HPC batch scheduling and DAG workflows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_trace_options(p):
        p.add_argument("--input", required=True, help="trace file path")
        p.add_argument("--format", choices=sorted(TRACE_PROFILES), default="swf",
                       help="trace dialect (default: swf)")

    def add_run_options(p):
        p.add_argument("--out", required=True, help="output directory for metrics files")
        p.add_argument("--export-format", choices=["csv", "json"], default="csv",
                       help="metrics file format (default: csv)")
        p.add_argument("--stop-time", type=int, default=None,
                       help="truncate the simulation at this time")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p_sim = sub.add_parser("simulate", help="replay a trace under one scheduling policy")
    add_trace_options(p_sim)
    p_sim.add_argument("--policy", choices=[p.value for p in POLICY_ORDER], default="fcfs")
    p_sim.add_argument("--cores", type=int, default=None,
                       help="machine size; defaults to the trace's MaxProcs header")
    p_sim.add_argument("--memory", type=int, default=0,
                       help="machine memory in KB; 0 disables memory enforcement")
    add_run_options(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_wf = sub.add_parser("workflow", help="execute a workflow JSON document")
    p_wf.add_argument("--input", required=True, help="workflow JSON path")
    p_wf.add_argument("--cpu", type=int, default=None,
                      help="override the document's cpu budget")
    p_wf.add_argument("--memory", type=int, default=None,
                      help="override the document's memory budget")
    add_run_options(p_wf)
    p_wf.set_defaults(func=_cmd_workflow)

    p_sweep = sub.add_parser("sweep", help="run all five policies and compare mean waits")
    add_trace_options(p_sweep)
    p_sweep.add_argument("--cores", type=int, default=None)
    p_sweep.add_argument("--memory", type=int, default=0)
    add_run_options(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate-trace", help="scan a trace and report malformed lines")
    add_trace_options(p_val)
    p_val.set_defaults(func=_cmd_validate_trace)

    p_gen = sub.add_parser("gen-dag", help="generate a synthetic workflow document")
    p_gen.add_argument("--out", required=True, help="output JSON path")
    p_gen.add_argument("--tasks", type=int, default=20)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--kind", choices=["layered", "chain", "forkjoin", "diamond"],
                       default="layered")
    p_gen.add_argument("--max-execution-time", type=int, default=100)
    p_gen.add_argument("--max-cpu", type=int, default=4)
    p_gen.add_argument("--max-memory", type=int, default=1024)
    p_gen.set_defaults(func=_cmd_gen_dag)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SchedSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
