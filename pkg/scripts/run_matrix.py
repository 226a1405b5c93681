#!/usr/bin/env python3
"""Completion-time grid over preset x strategy combinations.

Runs every requested placement preset under every requested strategy,
averages mean completion time over the seed list, and prints one table
with the baseline-relative percentage in parentheses.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from statistics import mean

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from numamig import PRESETS, build_preset, run

DEFAULT_STRATEGIES = ("none", "imar[1;1,1,1]", "imar2[1,4;1,1,1;0.97]")


def mean_completion(preset: str, strategy: str, seeds: list[int], workload: str) -> float:
    per_seed = []
    for seed in seeds:
        sc = build_preset(preset, strategy, seed=seed, workload=workload)
        res = run(sc, collect_trace=False)
        per_seed.append(mean(res.completion_ms.values()))
    return mean(per_seed)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--presets", default=",".join(PRESETS),
                    help="comma list (default: all)")
    ap.add_argument("--strategies", default=" ".join(DEFAULT_STRATEGIES),
                    help="space-separated list; strategy strings contain commas "
                         "and semicolons, never spaces")
    ap.add_argument("--seeds", default="0,1,2,3,4")
    ap.add_argument("--workload", default="uniform", choices=("uniform", "mixed"))
    ap.add_argument("--out", type=Path, default=None, help="optional JSON dump")
    args = ap.parse_args(argv)

    presets = [p.strip() for p in args.presets.split(",") if p.strip()]
    strategies = args.strategies.split()
    seeds = [int(s) for s in args.seeds.split(",")]

    grid: dict[str, dict[str, float]] = {}
    for preset in presets:
        grid[preset] = {}
        for strategy in strategies:
            grid[preset][strategy] = mean_completion(preset, strategy, seeds, args.workload)
            print(f"  done {preset:<11} {strategy}", file=sys.stderr)

    width = max(len(s) for s in strategies) + 2
    print(f"\n{'preset':<12}" + "".join(f"{s:>{width + 10}}" for s in strategies))
    for preset in presets:
        base = grid[preset][strategies[0]]
        cells = []
        for strategy in strategies:
            ms = grid[preset][strategy]
            cells.append(f"{ms:8.0f} ms ({100.0 * ms / base:5.1f}%)".rjust(width + 10))
        print(f"{preset:<12}" + "".join(cells))

    if args.out:
        args.out.write_text(json.dumps(
            {"seeds": seeds, "workload": args.workload, "mean_completion_ms": grid},
            indent=2) + "\n")
        print(f"\nwrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
