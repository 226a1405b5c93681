"""Command line entry points: simulate, compare and sweep."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import yaml

from .engine import Scenario, _validate, run, scenario_from_dict, scenario_to_dict
from .metrics import frame_average, write_trace
from .presets import DEFAULT_REMOTE_FACTOR, PRESETS, WORKLOADS, build_preset
from .strategy import parse_strategy, render_strategy

SCHEMA_VERSION = 1


def _summary_dict(sc: Scenario, result) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario_to_dict(sc),
        "completion_ms": result.completion_ms,
        "finished": result.finished,
        "migrations": result.migrations,
        "swaps": result.swaps,
        "rollbacks": result.rollbacks,
        "intervals": result.intervals,
        "end_time_ms": result.end_time_ms,
        "time_limit_ms": result.time_limit_ms,
        "completed_work": result.completed_work,
        "pt_series": [[t, pt] for t, pt in result.pt_series],
    }


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _execute_and_write(sc: Scenario, out_dir: Path, window: int) -> dict:
    """Run one scenario and write trace.csv, trace_avg.csv and summary.json."""
    if window < 1:
        raise ValueError("window must be >= 1")
    _validate(sc)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run(sc)
    write_trace(out_dir / "trace.csv", result.trace)
    write_trace(
        out_dir / "trace_avg.csv",
        frame_average(result.trace, window),
        comment=(
            f"non-overlapping block means over {window} intervals per thread; "
            "core/node from the last row of each block, events joined with +"
        ),
    )
    summary = _summary_dict(sc, result)
    _write_json(out_dir / "summary.json", summary)
    return summary


def run_preset(
    preset: str,
    strategy: str = "none",
    seed: int = 0,
    out_dir: str | Path = "runs",
    window: int = 50,
    workload: str = "uniform",
) -> dict:
    """Build, run and persist one of the named scenarios; returns the summary."""
    sc = build_preset(preset, strategy=strategy, seed=seed, workload=workload)
    return _execute_and_write(sc, Path(out_dir), window)


def _build_scenario(args) -> Scenario:
    if (args.preset is None) == (args.config is None):
        raise ValueError("exactly one of --preset or --config is required")
    if args.config is not None:
        if args.workload is not None or args.remote_factor is not None:
            raise ValueError("--workload and --remote-factor only apply to --preset")
        raw = yaml.safe_load(Path(args.config).read_text())
        if not isinstance(raw, dict):
            raise ValueError(f"config {args.config} must be a mapping")
        sc = scenario_from_dict(raw)
        if args.strategy is not None:
            sc.strategy = parse_strategy(args.strategy)
        if args.seed is not None:
            sc.seed = args.seed
        if args.limit_ms is not None:
            sc.time_limit_ms = args.limit_ms
        return sc
    return build_preset(
        args.preset,
        strategy=args.strategy if args.strategy is not None else "none",
        seed=args.seed if args.seed is not None else 0,
        workload=args.workload if args.workload is not None else "uniform",
        remote_factor=(
            args.remote_factor
            if args.remote_factor is not None
            else DEFAULT_REMOTE_FACTOR
        ),
        time_limit_ms=args.limit_ms,
    )


def cmd_simulate(args) -> int:
    sc = _build_scenario(args)
    summary = _execute_and_write(sc, args.out, args.window)
    print(f"strategy {render_strategy(sc.strategy)} seed {sc.seed}")
    for pid in sorted(summary["completion_ms"]):
        state = "finished" if summary["finished"][pid] else "hit time limit"
        print(f"  process {pid}: {summary['completion_ms'][pid]:.3f} ms ({state})")
    print(
        f"  migrations={summary['migrations']} swaps={summary['swaps']} "
        f"rollbacks={summary['rollbacks']} intervals={summary['intervals']}"
    )
    print(f"wrote {args.out}/trace.csv {args.out}/trace_avg.csv {args.out}/summary.json")
    return 0


def cmd_compare(args) -> int:
    sc = _build_scenario(args)
    baseline = parse_strategy(args.baseline)
    test = sc.strategy
    _validate(sc)
    base_res = run(dataclasses.replace(sc, strategy=baseline), collect_trace=False)
    test_res = run(dataclasses.replace(sc, strategy=test), collect_trace=False)
    percent = {
        pid: 100.0 * test_res.completion_ms[pid] / base_res.completion_ms[pid]
        for pid in base_res.completion_ms
    }
    args.out.mkdir(parents=True, exist_ok=True)
    _write_json(
        args.out / "comparison.json",
        {
            "schema_version": SCHEMA_VERSION,
            "scenario": scenario_to_dict(dataclasses.replace(sc, strategy=baseline)),
            "baseline": render_strategy(baseline),
            "test": render_strategy(test),
            "baseline_completion_ms": base_res.completion_ms,
            "test_completion_ms": test_res.completion_ms,
            "percent": percent,
        },
    )
    print(f"{'pid':>6} {'baseline_ms':>12} {'test_ms':>12} {'percent':>8}")
    for pid in sorted(percent):
        print(
            f"{pid:>6} {base_res.completion_ms[pid]:>12.3f} "
            f"{test_res.completion_ms[pid]:>12.3f} {percent[pid]:>7.1f}%"
        )
    print(f"wrote {args.out}/comparison.json")
    return 0


def cmd_sweep(args) -> int:
    sc = _build_scenario(args)
    try:
        seeds = [int(s) for s in args.seeds.split(",") if s.strip() != ""]
    except ValueError:
        raise ValueError(f"--seeds must be comma-separated integers, got {args.seeds!r}")
    if not seeds:
        raise ValueError("--seeds is empty")
    _validate(sc)
    args.out.mkdir(parents=True, exist_ok=True)
    per_seed: dict[int, dict[int, float]] = {}
    finished_all = True
    for seed in seeds:
        res = run(dataclasses.replace(sc, seed=seed), collect_trace=False)
        per_seed[seed] = res.completion_ms
        finished_all = finished_all and all(res.finished.values())
        seed_dir = args.out / f"seed_{seed}"
        seed_dir.mkdir(exist_ok=True)
        _write_json(
            seed_dir / "summary.json",
            _summary_dict(dataclasses.replace(sc, seed=seed), res),
        )
    pids = sorted(next(iter(per_seed.values())))
    mean = {
        pid: sum(per_seed[s][pid] for s in seeds) / len(seeds) for pid in pids
    }
    _write_json(
        args.out / "sweep.json",
        {
            "schema_version": SCHEMA_VERSION,
            "scenario": scenario_to_dict(sc),
            "strategy": render_strategy(sc.strategy),
            "seeds": seeds,
            "completion_ms": {pid: {s: per_seed[s][pid] for s in seeds} for pid in pids},
            "mean_completion_ms": mean,
            "finished_all": finished_all,
        },
    )
    print(f"strategy {render_strategy(sc.strategy)} over seeds {seeds}")
    for pid in pids:
        print(f"  process {pid}: mean {mean[pid]:.3f} ms")
    print(f"wrote {args.out}/sweep.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=PRESETS, help="named scenario")
    common.add_argument("--config", type=Path, help="YAML scenario file")
    common.add_argument(
        "--strategy",
        help="none | imar[T;a,b,g] | imar2[Tmin,Tmax;a,b,g;omega]",
    )
    common.add_argument("--seed", type=int)
    common.add_argument("--out", type=Path, default=Path("runs"))
    common.add_argument("--window", type=int, default=50, help="frame-average window")
    common.add_argument("--limit-ms", type=float, help="simulated time limit")
    common.add_argument("--workload", choices=WORKLOADS, help="preset workload mix")
    common.add_argument("--remote-factor", type=float, help="preset distance off-diagonal")
    parser = argparse.ArgumentParser(
        prog="numamig",
        description="Thread migration strategies on a simulated NUMA machine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", parents=[common], help="run one scenario")
    sim.set_defaults(func=cmd_simulate)
    cmp_ = sub.add_parser(
        "compare", parents=[common], help="run a strategy against a baseline"
    )
    cmp_.add_argument("--baseline", default="none", help="baseline strategy string")
    cmp_.set_defaults(func=cmd_compare)
    swp = sub.add_parser("sweep", parents=[common], help="run several seeds")
    swp.add_argument("--seeds", default="0,1,2,3,4", help="comma-separated seeds")
    swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
