#!/usr/bin/env python3
"""Run the ablation sweeps and print per-cell mean normalized scores.

Axes: parents (m), weights (pascal/equal/dirichlet), sigma (mutation
scale), tournament (selection pressure), beta (wireless penalty).
Scores are min-max normalized per task over each sweep, lower = better.

Usage:
    python3 scripts/run_ablations.py --out results/ablation [--axes parents,beta]
"""
import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

from pwrga.cli import main as cli
from pwrga.experiments import ABLATION_AXES


def print_cell_means(path: Path) -> None:
    cells = defaultdict(list)
    with path.open() as fh:
        for row in csv.DictReader(fh):
            cells[(row["task"], row["axis_value"])].append(float(row["score"]))
    for (task, value), scores in sorted(cells.items()):
        print(f"  {task:9s} {value:>8s}  mean normalized {sum(scores) / len(scores):.3f}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/ablation")
    ap.add_argument("--seeds", default="20")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--axes", default=",".join(sorted(ABLATION_AXES)))
    args = ap.parse_args()

    out = Path(args.out)
    for axis in (a.strip() for a in args.axes.split(",") if a.strip()):
        print(f"== ablation: {axis} ==", flush=True)
        rc = cli(["ablate", "--axis", axis, "--seeds", args.seeds,
                  "--jobs", str(args.jobs), "--out", str(out)])
        if rc != 0:
            return rc
        print_cell_means(out / f"ablation_{axis}.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
