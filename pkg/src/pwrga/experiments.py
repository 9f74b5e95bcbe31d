"""Benchmark task/method registries and the suite/ablation drivers.

Each task carries the GA parameters used in the corresponding benchmark
study (population, generations, selection, elitism, mutation schedule)
plus a frozen problem instance so every invocation sees the same
landscape. Methods are operator presets; `pwrN`/`equalN`/`dirichletN`
parse the parent count from the name.

All entry points are pure: they return traces/rows and leave file
formatting to the CLI layer.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .engine import EngineConfig, RunTrace, run
from .errors import ConfigurationError
from .operators import MutationSpec, OperatorSpec
from .problems import (
    FirProblem,
    PidProblem,
    SphereProblem,
    TspProblem,
    WirelessProblem,
    generate_tsp,
    generate_wireless,
)

INSTANCE_SEED = 42  # frozen landscape for the instance-backed tasks
DEFAULT_SEEDS = tuple(range(20))

# "slightly higher mutation" variant: scale factor for rate and flip rate
MUT_BOOST = 1.5


@dataclass(frozen=True)
class TaskSpec:
    name: str
    problem_factory: Callable[[], object]
    population_size: int
    generations: int
    mutation: MutationSpec
    suite_methods: tuple
    tournament_k: int = 3
    elitism_count: int = 2
    # set only for instance-backed tasks (wireless, tsp)
    instance_factory: Optional[Callable[[int], object]] = None
    instance_loader: Optional[Callable[[str], object]] = None

    def problem(self):
        return self.problem_factory()


TASKS = {
    "pid": TaskSpec(
        name="pid",
        problem_factory=PidProblem,
        population_size=40,
        generations=80,
        mutation=MutationSpec(rate=0.2, sigma0=0.1),
        suite_methods=("arith", "blx", "pwr3", "pwr5"),
    ),
    "fir": TaskSpec(
        name="fir",
        problem_factory=FirProblem,
        population_size=30,
        generations=40,
        mutation=MutationSpec(rate=0.25, sigma0=0.03),
        suite_methods=("arith", "blx", "pwr3", "pwr5"),
    ),
    "wireless": TaskSpec(
        name="wireless",
        problem_factory=lambda: generate_wireless(links=8, seed=INSTANCE_SEED),
        population_size=50,
        generations=120,
        mutation=MutationSpec(rate=0.2, sigma0=0.1, flip_rate=0.1),
        suite_methods=("arith", "sbx", "de", "pwr3", "pwr5", "pwr3mut"),
        instance_factory=lambda seed: generate_wireless(links=8, seed=seed),
        instance_loader=WirelessProblem.from_json,
    ),
    "tsp": TaskSpec(
        name="tsp",
        problem_factory=lambda: generate_tsp(32, seed=INSTANCE_SEED),
        population_size=60,
        generations=150,
        mutation=MutationSpec(swap_rate=0.25),
        suite_methods=("pmx", "pwr3"),
        elitism_count=1,
        instance_factory=lambda seed: generate_tsp(32, seed=seed),
        instance_loader=TspProblem.from_json,
    ),
    "sphere": TaskSpec(
        name="sphere",
        problem_factory=SphereProblem,
        population_size=40,
        generations=80,
        mutation=MutationSpec(rate=0.2, sigma0=0.1),
        suite_methods=("arith", "pwr3"),
    ),
}

_FIXED_METHODS = {
    "arith": OperatorSpec(kind="arith", m=2),
    "blx": OperatorSpec(kind="blx", m=2, alpha=0.3),
    "sbx": OperatorSpec(kind="sbx", m=2, eta=15.0),
    "de": OperatorSpec(kind="de", m=3, f_weight=0.5),
    "pmx": OperatorSpec(kind="pmx", m=2),
}


def resolve_method(name: str) -> tuple[OperatorSpec, bool]:
    """Method name -> (operator, boosted-mutation flag)."""
    if name in _FIXED_METHODS:
        return _FIXED_METHODS[name], False
    base, boost = (name[:-3], True) if name.endswith("mut") else (name, False)
    for prefix, shape in (("pwr", "pascal"), ("equal", "equal"), ("dirichlet", "dirichlet")):
        if base.startswith(prefix) and base[len(prefix):].isdigit():
            m = int(base[len(prefix):])
            return OperatorSpec(kind="pwr", m=m, weight_shape=shape), boost
    known = sorted(_FIXED_METHODS) + ["pwrN", "equalN", "dirichletN", "pwrNmut"]
    raise ConfigurationError(f"unknown method {name!r}; valid methods: {known}")


def method_names() -> list:
    return sorted(_FIXED_METHODS) + ["pwr<m>", "equal<m>", "dirichlet<m>", "pwr<m>mut"]


_ENGINE_INT_KEYS = {"population_size", "generations", "tournament_k", "elitism_count"}
_ALIASES = {"pop": "population_size", "gens": "generations", "k": "tournament_k",
            "elitism": "elitism_count"}
_MUTATION_KEYS = {"rate", "sigma0", "decay", "swap_rate", "flip_rate"}
_OPERATOR_KEYS = {"m", "alpha", "eta", "f_weight", "weight_shape"}
_PROBLEM_KEYS = {"beta"}  # wireless penalty coefficient (ablation axis)
_INSTANCE_KEYS = {"instance_seed", "instance"}


def _coerce(key: str, value):
    if isinstance(value, str):
        try:
            if key in _ENGINE_INT_KEYS or key == "instance_seed":
                return int(value)
            if key in ("weight_shape", "instance"):
                return value
            return float(value)
        except ValueError:
            raise ConfigurationError(
                f"override {key!r} expects a number, got {value!r}"
            ) from None
    return value


def apply_overrides(task: TaskSpec, operator: OperatorSpec, mutation: MutationSpec,
                    overrides: Optional[dict]):
    """Fold --set style overrides into (task, operator, mutation).

    Returns the adjusted triple; unknown keys raise a configuration error
    naming the field.
    """
    if not overrides:
        return task, operator, mutation
    for raw_key, value in overrides.items():
        key = _ALIASES.get(raw_key, raw_key)
        value = _coerce(key, value)
        if key in _ENGINE_INT_KEYS:
            task = replace(task, **{key: value})
        elif key in _MUTATION_KEYS:
            mutation = replace(mutation, **{key: value})
        elif key in _OPERATOR_KEYS:
            operator = replace(operator, **{key: value})
        elif key in _PROBLEM_KEYS:
            task = replace(
                task,
                problem_factory=_rebind_problem(task.problem_factory, key, value),
            )
        elif key == "instance_seed":
            if task.instance_factory is None:
                raise ConfigurationError(
                    f"task {task.name!r} has no generated instance to reseed"
                )
            task = replace(
                task,
                problem_factory=lambda f=task.instance_factory, s=int(value): f(s),
            )
        elif key == "instance":
            if task.instance_loader is None:
                raise ConfigurationError(
                    f"task {task.name!r} cannot load instances from files"
                )
            task = replace(
                task,
                problem_factory=_load_instance(task.instance_loader, str(value)),
            )
        else:
            known = sorted(
                _ENGINE_INT_KEYS | _MUTATION_KEYS | _OPERATOR_KEYS
                | _PROBLEM_KEYS | _INSTANCE_KEYS | set(_ALIASES)
            )
            raise ConfigurationError(f"unknown override {raw_key!r}; valid keys: {known}")
    return task, operator, mutation


def _load_instance(loader, path):
    def load():
        with open(path) as fh:
            return loader(fh.read())

    return load


def _rebind_problem(factory, key, value):
    def rebound():
        problem = factory()
        if not hasattr(problem, key):
            raise ConfigurationError(
                f"override {key!r} does not apply to this task's problem"
            )
        setattr(problem, key, value)
        return problem

    return rebound


def build(task_name: str, method: str, seed: int,
          overrides: Optional[dict] = None):
    """Resolve names into a ready (problem, EngineConfig) pair."""
    if task_name not in TASKS:
        raise ConfigurationError(
            f"unknown task {task_name!r}; valid tasks: {sorted(TASKS)}"
        )
    task = TASKS[task_name]
    operator, boost = resolve_method(method)
    mutation = task.mutation
    if boost:
        mutation = replace(
            mutation,
            rate=min(1.0, mutation.rate * MUT_BOOST),
            flip_rate=None if mutation.flip_rate is None
            else min(1.0, mutation.flip_rate * MUT_BOOST),
        )
    task, operator, mutation = apply_overrides(task, operator, mutation, overrides)
    config = EngineConfig(
        population_size=task.population_size,
        generations=task.generations,
        operator=operator,
        mutation=mutation,
        seed=seed,
        tournament_k=task.tournament_k,
        elitism_count=task.elitism_count,
    )
    return task.problem(), config


def run_one(task_name: str, method: str, seed: int,
            overrides: Optional[dict] = None) -> RunTrace:
    problem, config = build(task_name, method, seed, overrides)
    return run(problem, config)


def _run_one_star(args):
    return run_one(*args)


def run_set(task_name: str, method: str, seeds=DEFAULT_SEEDS,
            overrides: Optional[dict] = None, jobs: int = 1) -> list:
    """One trace per seed, order matching `seeds`."""
    seeds = list(seeds)
    if not seeds:
        raise ConfigurationError("seed list must be non-empty")
    if jobs <= 1 or len(seeds) == 1:
        return [run_one(task_name, method, seed, overrides) for seed in seeds]
    work = [(task_name, method, seed, overrides) for seed in seeds]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one_star, work))


def suite(task_name: str, seeds=DEFAULT_SEEDS, overrides: Optional[dict] = None,
          jobs: int = 1) -> dict:
    """The benchmark's configured method set -> traces, in table order."""
    if task_name not in TASKS:
        raise ConfigurationError(
            f"unknown task {task_name!r}; valid tasks: {sorted(TASKS)}"
        )
    return {
        method: run_set(task_name, method, seeds, overrides, jobs=jobs)
        for method in TASKS[task_name].suite_methods
    }


# ablation axes: (grid, tasks, override key) per the ablation studies
ABLATION_AXES = {
    "parents": ((2, 3, 4, 5, 7), ("pid", "fir", "wireless", "tsp")),
    "weights": (("pascal", "equal", "dirichlet"), ("pid", "fir", "wireless", "tsp")),
    "sigma": ((0.01, 0.02, 0.05, 0.1), ("pid", "fir", "wireless")),
    "tournament": ((2, 3, 5), ("pid", "fir", "wireless", "tsp")),
    "beta": ((10.0, 50.0, 100.0, 300.0), ("wireless",)),
}

_AXIS_METHOD = {
    "parents": lambda value: (f"pwr{value}", None),
    "weights": lambda value: ("pwr3", {"weight_shape": value}),
    "sigma": lambda value: ("pwr3", {"sigma0": value}),
    "tournament": lambda value: ("pwr3", {"tournament_k": value}),
    "beta": lambda value: ("pwr3", {"beta": value}),
}


def ablate(axis: str, seeds=DEFAULT_SEEDS, overrides: Optional[dict] = None,
           jobs: int = 1) -> list:
    """Sweep one ablation axis.

    Returns long-format rows (task, axis_value, seed, score) where score is
    the champion fitness min-max normalized per task over the whole sweep
    and oriented so lower is always better.
    """
    if axis not in ABLATION_AXES:
        raise ConfigurationError(
            f"unknown axis {axis!r}; valid axes: {sorted(ABLATION_AXES)}"
        )
    grid, tasks = ABLATION_AXES[axis]
    rows = []
    for task_name in tasks:
        raw = []  # (axis_value, seed, champion_fitness)
        for value in grid:
            method, cell = _AXIS_METHOD[axis](value)
            cell = {**(overrides or {}), **(cell or {})}
            traces = run_set(task_name, method, seeds, cell, jobs=jobs)
            raw.extend(
                (value, seed, trace.champion_fitness)
                for seed, trace in zip(seeds, traces)
            )
        scores = np.array([score for _, _, score in raw])
        lo, hi = scores.min(), scores.max()
        span = hi - lo
        direction = getattr(TASKS[task_name].problem(), "direction", "min")
        for (value, seed, score), x in zip(raw, scores):
            if span == 0.0:
                norm = 0.0
            elif direction == "max":
                norm = (hi - x) / span
            else:
                norm = (x - lo) / span
            rows.append((task_name, value, seed, float(norm)))
    return rows


def ablation_cell_means(rows) -> dict:
    """(task, axis_value) -> mean normalized score, from ablate() rows."""
    cells = {}
    for task, value, _, score in rows:
        cells.setdefault((task, value), []).append(score)
    return {key: float(np.mean(scores)) for key, scores in cells.items()}
