"""Command-line front end.

Subcommands:
    run              traces for one (task, method) across seeds
    suite            the benchmark's method table for one task
    ablate           one ablation axis, long-format normalized scores
    stats            Friedman/Nemenyi ranking over suite score files
    export-instance  frozen problem instance as JSON

Suite and ablation CSVs contain no timing columns and print floats via
repr, so reruns with identical seeds are byte-identical. Per-generation
wallclock lands only in `run` traces and the opt-in overhead report.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .analytics import (
    NEMENYI_Q_05,
    RankSummary,
    _average_ranks,
    friedman_nemenyi,
    overhead_report,
    summarize,
)
from .errors import (
    ConfigurationError,
    IncompleteDesignError,
    InsufficientDataError,
)
from .experiments import (
    ABLATION_AXES,
    DEFAULT_SEEDS,
    TASKS,
    ablate,
    run_set,
    suite,
)

SCHEMA_VERSION = 1

TRACE_HEADER = "seed,generation,best,mean,std,wallclock_ms"


def _parse_seeds(text: str) -> list:
    try:
        if "," in text:
            seeds = [int(part) for part in text.split(",") if part != ""]
        else:
            seeds = list(range(int(text)))
    except ValueError:
        raise ConfigurationError(
            f"seeds must be an integer count or a comma list, got {text!r}"
        ) from None
    if not seeds:
        raise ConfigurationError(f"empty seed specification {text!r}")
    return seeds


def _parse_overrides(pairs, config_path=None) -> dict:
    overrides = {}
    if config_path:
        with open(config_path) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"config file {config_path} must hold a JSON object")
        overrides.update(loaded)
    for pair in pairs or ():
        if "=" not in pair:
            raise ConfigurationError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def _fmt(value: float) -> str:
    return repr(float(value))


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_text(text)
    except OSError as exc:
        raise SystemExit(f"cannot write {path}: {exc}")


def _genome_payload(champion):
    if isinstance(champion, tuple):
        powers, mods = champion
        return {"powers": [float(v) for v in powers],
                "modulations": [int(v) for v in mods]}
    arr = np.asarray(champion)
    if np.issubdtype(arr.dtype, np.integer):
        return [int(v) for v in arr]
    return [float(v) for v in arr]


def cmd_run(args) -> int:
    seeds = _parse_seeds(args.seeds)
    overrides = _parse_overrides(args.set, args.config)
    traces = run_set(args.task, args.method, seeds, overrides, jobs=args.jobs)
    out = Path(args.out)
    champions = []
    for seed, trace in zip(seeds, traces):
        lines = [TRACE_HEADER]
        lines += [
            f"{seed},{gen},{_fmt(trace.best[gen])},{_fmt(trace.mean[gen])},"
            f"{_fmt(trace.std[gen])},{_fmt(trace.wallclock_ms[gen])}"
            for gen in range(len(trace))
        ]
        _write(out / f"{args.task}_{args.method}_seed{seed}.csv",
               "\n".join(lines) + "\n")
        champions.append({
            "seed": seed,
            "champion": _genome_payload(trace.champion),
            "champion_fitness": trace.champion_fitness,
        })
    summary = {
        "schema_version": SCHEMA_VERSION,
        "task": args.task,
        "method": args.method,
        "runs": champions,
    }
    _write(out / f"{args.task}_{args.method}_summary.json",
           json.dumps(summary, indent=2) + "\n")
    print(f"wrote {len(seeds)} traces + summary to {out}")
    return 0


def cmd_suite(args) -> int:
    seeds = _parse_seeds(args.seeds)
    overrides = _parse_overrides(args.set, args.config)
    results = suite(args.task, seeds, overrides, jobs=args.jobs)
    problem = TASKS[args.task].problem()
    wireless = hasattr(problem, "feasible")
    out = Path(args.out)

    table = ["method,median,mean,std,iqr" + (",feasibility" if wireless else "")]
    scores = ["method,seed,score"]
    for method, traces in results.items():
        fits = [trace.champion_fitness for trace in traces]
        median, mean, std, iqr = summarize(fits)
        row = f"{method},{_fmt(median)},{_fmt(mean)},{_fmt(std)},{_fmt(iqr)}"
        if wireless:
            feas = np.mean([problem.feasible(t.champion) for t in traces])
            row += f",{_fmt(feas)}"
        table.append(row)
        scores += [
            f"{method},{seed},{_fmt(trace.champion_fitness)}"
            for seed, trace in zip(seeds, traces)
        ]
    _write(out / f"{args.task}_suite.csv", "\n".join(table) + "\n")
    _write(out / f"{args.task}_scores.csv", "\n".join(scores) + "\n")

    if args.overhead:
        walls = {m: np.concatenate([t.wallclock_ms for t in traces])
                 for m, traces in results.items()}
        baseline = "pmx" if args.task == "tsp" else "arith"
        ratios = overhead_report(walls, baseline=baseline)
        lines = ["method,median_wallclock_ratio"]
        lines += [f"{m},{_fmt(r)}" for m, r in ratios.items()]
        _write(out / f"{args.task}_overhead.csv", "\n".join(lines) + "\n")

    print(f"wrote {args.task} suite ({len(results)} methods) to {out}")
    return 0


def cmd_ablate(args) -> int:
    seeds = _parse_seeds(args.seeds)
    overrides = _parse_overrides(args.set, args.config)
    rows = ablate(args.axis, seeds, overrides, jobs=args.jobs)
    lines = ["task,axis_value,seed,score"]
    lines += [f"{task},{value},{seed},{_fmt(score)}"
              for task, value, seed, score in rows]
    out = Path(args.out)
    _write(out / f"ablation_{args.axis}.csv", "\n".join(lines) + "\n")
    print(f"wrote ablation over {args.axis} to {out}")
    return 0


def _read_scores(path: Path) -> tuple[str, dict]:
    task = path.name.split("_")[0]
    per_method = {}
    lines = path.read_text().strip().splitlines()
    if lines[0] != "method,seed,score":
        raise ConfigurationError(f"{path} is not a suite scores file")
    for line in lines[1:]:
        method, _, score = line.split(",")
        per_method.setdefault(method, []).append(float(score))
    return task, {m: float(np.median(v)) for m, v in per_method.items()}


def cmd_stats(args) -> int:
    tasks, data = [], []
    for name in args.inputs:
        task, medians = _read_scores(Path(name))
        tasks.append(task)
        data.append(medians)

    if args.methods:
        methods = args.methods.split(",")
        missing = [(f"task {t}", f"method {m}")
                   for t, row in zip(tasks, data) for m in methods if m not in row]
        if missing:
            raise IncompleteDesignError(missing)
    else:
        common = set(data[0])
        for row in data[1:]:
            common &= set(row)
        if len(common) < 2:
            raise ConfigurationError(
                "fewer than 2 methods common to all inputs; pass --methods"
            )
        methods = sorted(common)

    directions = [
        getattr(TASKS[t].problem(), "direction", "min") if t in TASKS else "min"
        for t in tasks
    ]
    matrix = [[row[m] for m in methods] for row in data]
    if len(tasks) == 1:
        print("warning: single task input, CD is degenerate with N=1")
        row = -np.asarray(matrix[0]) if directions[0] == "max" else np.asarray(matrix[0])
        k = len(methods)
        out = RankSummary(
            methods=methods,
            mean_ranks=_average_ranks(row),
            friedman_statistic=0.0,
            nemenyi_cd=NEMENYI_Q_05[k] * math.sqrt(k * (k + 1) / 6.0),
            n_tasks=1,
        )
    else:
        out = friedman_nemenyi(matrix, methods, directions)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "methods": out.methods,
        "mean_ranks": [float(r) for r in out.mean_ranks],
        "friedman_statistic": out.friedman_statistic,
        "nemenyi_cd": out.nemenyi_cd,
        "n_tasks": out.n_tasks,
    }
    outdir = Path(args.out)
    _write(outdir / "ranks.json", json.dumps(payload, indent=2) + "\n")
    cd_lines = ["method,mean_rank,cd"]
    cd_lines += [f"{m},{_fmt(r)},{_fmt(out.nemenyi_cd)}"
                 for m, r in zip(out.methods, out.mean_ranks)]
    _write(outdir / "cd_data.csv", "\n".join(cd_lines) + "\n")
    for m, r in zip(out.methods, out.mean_ranks):
        print(f"{m}: mean rank {r:.3f}")
    print(f"friedman chi2 = {out.friedman_statistic:.6f}, CD = {out.nemenyi_cd:.6f}")
    return 0


def cmd_export_instance(args) -> int:
    problem = TASKS[args.task].problem()
    if not hasattr(problem, "to_json"):
        raise ConfigurationError(
            f"task {args.task!r} has no frozen instance to export"
        )
    out = Path(args.out)
    _write(out / f"{args.task}_instance.json", problem.to_json() + "\n")
    print(f"wrote {args.task} instance to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwrga",
        description="Pascal-weighted recombination benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, task=True, method=False):
        if task:
            p.add_argument("--task", required=True, choices=sorted(TASKS))
        if method:
            p.add_argument("--method", required=True)
        p.add_argument("--seeds", default=str(len(DEFAULT_SEEDS)),
                       help="count (e.g. 20 -> seeds 0..19) or comma list")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override an engine/mutation/operator parameter")
        p.add_argument("--config", help="JSON file of overrides (flat keys)")
        p.add_argument("--out", default="results", help="output directory")
        p.add_argument("--jobs", type=int, default=1)

    p_run = sub.add_parser("run", help="trace one (task, method) across seeds")
    common(p_run, method=True)
    p_run.set_defaults(func=cmd_run)

    p_suite = sub.add_parser("suite", help="benchmark method table for a task")
    common(p_suite)
    p_suite.add_argument("--overhead", action="store_true",
                         help="also write per-method wallclock ratios")
    p_suite.set_defaults(func=cmd_suite)

    p_ablate = sub.add_parser("ablate", help="sweep one ablation axis")
    p_ablate.add_argument("--axis", required=True, choices=sorted(ABLATION_AXES))
    p_ablate.add_argument("--seeds", default=str(len(DEFAULT_SEEDS)))
    p_ablate.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_ablate.add_argument("--config", help="JSON file of overrides (flat keys)")
    p_ablate.add_argument("--out", default="results")
    p_ablate.add_argument("--jobs", type=int, default=1)
    p_ablate.set_defaults(func=cmd_ablate)

    p_stats = sub.add_parser("stats", help="rank methods across suite outputs")
    p_stats.add_argument("inputs", nargs="+", help="suite *_scores.csv files")
    p_stats.add_argument("--methods", help="comma list; default: common methods")
    p_stats.add_argument("--out", default="results")
    p_stats.set_defaults(func=cmd_stats)

    p_exp = sub.add_parser("export-instance", help="write a task instance JSON")
    p_exp.add_argument("--task", required=True, choices=sorted(TASKS))
    p_exp.add_argument("--out", default="results")
    p_exp.set_defaults(func=cmd_export_instance)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, IncompleteDesignError, InsufficientDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
