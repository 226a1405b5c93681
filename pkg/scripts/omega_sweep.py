#!/usr/bin/env python3
"""Sweep the adaptive strategy's acceptance threshold omega.

For each omega, runs the adaptive strategy on a well-placed preset (where
migrations can only hurt) and a badly-placed one (where they help), and
reports mean completion relative to the no-migration baseline. Low omega
keeps harmful migrations; omega too close to 1 rolls back on noise.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from statistics import mean

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from numamig import build_preset, run

GOOD, BAD = "direct", "crossed"


def mean_completion(preset: str, strategy: str, seeds: list[int]) -> tuple[float, int]:
    per_seed, rollbacks = [], 0
    for seed in seeds:
        res = run(build_preset(preset, strategy, seed=seed), collect_trace=False)
        per_seed.append(mean(res.completion_ms.values()))
        rollbacks += res.rollbacks
    return mean(per_seed), rollbacks


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--omegas", default="0.80,0.90,0.95,0.97,0.99")
    ap.add_argument("--seeds", default="0,1,2")
    args = ap.parse_args(argv)

    omegas = [float(s) for s in args.omegas.split(",")]
    seeds = [int(s) for s in args.seeds.split(",")]

    baselines = {p: mean_completion(p, "none", seeds)[0] for p in (GOOD, BAD)}
    print(f"baselines: {GOOD} {baselines[GOOD]:.0f} ms, {BAD} {baselines[BAD]:.0f} ms")
    print(f"\n{'omega':>6} {GOOD + ' %':>10} {'rollbacks':>10} {BAD + ' %':>10} {'rollbacks':>10}")
    for omega in omegas:
        strategy = f"imar2[1,4;1,1,1;{omega}]"
        row = [f"{omega:6.2f}"]
        for preset in (GOOD, BAD):
            ms, rb = mean_completion(preset, strategy, seeds)
            row.append(f"{100.0 * ms / baselines[preset]:9.1f}% {rb:10d}")
        print(" ".join(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
