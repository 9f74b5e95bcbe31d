#!/usr/bin/env python3
"""Reproduce the four benchmark method tables and the cross-task ranking.

Runs each task's suite (20 seeds by default), writes per-task summary
and score CSVs plus frozen instance JSONs, then ranks the methods
common to all four tasks with the Friedman/Nemenyi pipeline.

Usage:
    python3 scripts/reproduce_benchmarks.py --out results [--seeds 20] [--jobs 4]
"""
import argparse
import sys
from pathlib import Path

from pwrga.cli import main as cli

TASKS = ("pid", "fir", "wireless", "tsp")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--seeds", default="20")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--tasks", default=",".join(TASKS),
                    help="comma list out of pid,fir,wireless,tsp")
    args = ap.parse_args()

    tasks = [t.strip() for t in args.tasks.split(",") if t.strip()]
    out = Path(args.out)
    for task in tasks:
        print(f"== suite: {task} ==", flush=True)
        rc = cli(["suite", "--task", task, "--seeds", args.seeds,
                  "--jobs", str(args.jobs), "--overhead", "--out", str(out)])
        if rc != 0:
            return rc
        if task in ("wireless", "tsp"):
            cli(["export-instance", "--task", task, "--out", str(out)])

    score_files = [str(out / f"{t}_scores.csv") for t in tasks]
    if len(score_files) >= 2:
        print("== cross-task ranking (methods common to all tasks) ==")
        rc = cli(["stats", *score_files, "--out", str(out)])
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
