"""Generational GA loop.

One seeded Generator drives a run end to end: init, tournaments,
recombination, mutation. Elites are copied verbatim (never mutated), the
rest of the population is bred from tournament winners; duplicate
parents within one mating group are allowed. A run is a pure function of
(problem, config): identical seeds give bit-identical traces.

Problems are duck-typed. Every problem exposes `encoding`, `direction`,
`evaluate(genome)` and `random_genome(rng)`; real-coded ones add
`lower`/`upper`, permutation ones `distance`, the paired
power/modulation encoding `power_lower`/`power_upper`.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, EvaluationError
from .operators import (
    MutationSpec,
    OperatorSpec,
    crossover_arithmetic,
    crossover_blx,
    crossover_pmx,
    crossover_sbx,
    de_style_step,
    mutate_bitflip,
    mutate_modulation,
    mutate_real,
    mutate_swap,
    pwr_logit,
    pwr_permutation,
    pwr_power_modulation,
    pwr_real,
    resolve_decay,
)
from .pascal import dirichlet_weights, equal_weights, pascal_weights

ENCODINGS = ("real", "binary", "permutation", "power_modulation")

# which operator kinds make sense on which genome encodings
_COMPATIBLE = {
    "real": {"pwr", "arith", "blx", "sbx", "de"},
    "binary": {"pwr"},
    "permutation": {"pwr", "pmx"},
    "power_modulation": {"pwr", "arith", "blx", "sbx", "de"},
}


@dataclass
class EngineConfig:
    population_size: int
    generations: int
    operator: OperatorSpec
    mutation: MutationSpec
    seed: int = 0
    tournament_k: int = 3
    elitism_count: int = 2
    direction: Optional[str] = None  # None -> problem.direction


@dataclass
class RunTrace:
    """Per-generation population stats plus the best genome ever seen."""

    seed: int
    best: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    wallclock_ms: np.ndarray
    champion: object
    champion_fitness: float

    def __len__(self):
        return self.best.size


def tournament_select(population, fitnesses, k: int, rng: np.random.Generator,
                      maximize: bool = False) -> int:
    """Draw k distinct indices uniformly, return the fittest; exact fitness
    ties go to the smallest index."""
    n = len(population)
    if k < 2:
        raise ConfigurationError(f"tournament size must be >= 2, got {k}")
    if k > n:
        raise ConfigurationError(f"tournament size {k} exceeds population {n}")
    idx = np.sort(rng.choice(n, size=k, replace=False))
    picks = np.asarray(fitnesses)[idx]
    pos = int(np.argmax(picks)) if maximize else int(np.argmin(picks))
    return int(idx[pos])


def _copy_genome(genome):
    if isinstance(genome, tuple):
        return tuple(part.copy() for part in genome)
    return genome.copy()


def _evaluate(problem, genome) -> float:
    value = float(problem.evaluate(genome))
    if not np.isfinite(value):
        raise EvaluationError(f"non-finite fitness {value!r} for genome {genome!r}")
    return value


def _validate(problem, config: EngineConfig) -> str:
    enc = getattr(problem, "encoding", None)
    if enc not in ENCODINGS:
        raise ConfigurationError(f"unknown problem encoding {enc!r}")
    op = config.operator
    if op.kind not in _COMPATIBLE[enc]:
        raise ConfigurationError(
            f"operator {op.kind!r} cannot recombine {enc!r} genomes"
        )
    if config.population_size < 2:
        raise ConfigurationError("population_size must be >= 2")
    if config.population_size < op.m:
        raise ConfigurationError(
            f"population_size {config.population_size} < parent count m={op.m}"
        )
    if config.generations < 0:
        raise ConfigurationError("generations must be >= 0")
    if not 0 <= config.elitism_count < config.population_size:
        raise ConfigurationError(
            f"elitism_count must be in [0, population_size), got {config.elitism_count}"
        )
    if not 2 <= config.tournament_k <= config.population_size:
        raise ConfigurationError(
            f"tournament_k must be in [2, population_size], got {config.tournament_k}"
        )
    direction = config.direction or getattr(problem, "direction", "min")
    if direction not in ("min", "max"):
        raise ConfigurationError(f"direction must be 'min' or 'max', got {direction!r}")
    return direction


def _make_child(problem, op: OperatorSpec, weights, parents, rng):
    enc = problem.encoding
    if op.kind == "pwr":
        w = dirichlet_weights(op.m, rng) if weights is None else weights
        if enc == "real":
            return pwr_real(parents, w, rng)
        if enc == "binary":
            return pwr_logit(parents, w, rng)
        if enc == "permutation":
            return pwr_permutation(parents, w, problem.distance, rng)
        return pwr_power_modulation(parents, w, rng)

    if enc == "permutation":  # pmx is the only non-pwr permutation kind
        return crossover_pmx(parents[0], parents[1], rng)

    if enc == "power_modulation":
        reals = [p for p, _ in parents]
        bounds = (problem.power_lower, problem.power_upper)
        child_p = _real_crossover(op, reals, bounds, rng)
        mods = np.stack([m for _, m in parents])
        slots = rng.integers(0, len(parents), size=mods.shape[1])
        child_m = mods[slots, np.arange(mods.shape[1])]
        return child_p, child_m

    bounds = (problem.lower, problem.upper)
    return _real_crossover(op, parents, bounds, rng)


def _real_crossover(op: OperatorSpec, parents, bounds, rng):
    if op.kind == "arith":
        return crossover_arithmetic(parents[0], parents[1], rng)
    if op.kind == "blx":
        return crossover_blx(parents[0], parents[1], op.alpha, rng, bounds=bounds)
    if op.kind == "sbx":
        first, _ = crossover_sbx(parents[0], parents[1], op.eta, rng, bounds=bounds)
        return first
    if op.kind == "de":
        return de_style_step(parents[0], parents[1], parents[2], op.f_weight,
                             bounds=bounds)
    raise ConfigurationError(f"no real-vector recombination for kind {op.kind!r}")


def _mutate(problem, genome, spec: MutationSpec, generation: int, rng):
    enc = problem.encoding
    if enc == "real":
        return mutate_real(genome, spec, generation, (problem.lower, problem.upper), rng)
    if enc == "binary":
        return mutate_bitflip(genome, spec.rate, rng)
    if enc == "permutation":
        return mutate_swap(genome, spec.swap_rate, rng)
    powers, mods = genome
    powers = mutate_real(powers, spec, generation,
                         (problem.power_lower, problem.power_upper), rng)
    flip = spec.flip_rate if spec.flip_rate is not None else spec.rate
    mods = mutate_modulation(mods, flip, rng)
    return powers, mods


def run(problem, config: EngineConfig) -> RunTrace:
    direction = _validate(problem, config)
    maximize = direction == "max"
    op = config.operator

    mutation = config.mutation
    if mutation.decay is None:
        mutation = MutationSpec(
            rate=mutation.rate,
            sigma0=mutation.sigma0,
            decay=resolve_decay(mutation, config.generations),
            swap_rate=mutation.swap_rate,
            flip_rate=mutation.flip_rate,
        )

    weights = None
    if op.kind == "pwr":
        if op.weight_shape == "pascal":
            weights = pascal_weights(op.m)
        elif op.weight_shape == "equal":
            weights = equal_weights(op.m)
        # dirichlet stays None: a fresh draw per offspring

    rng = np.random.default_rng(config.seed)
    population = [problem.random_genome(rng) for _ in range(config.population_size)]
    fitnesses = np.array([_evaluate(problem, g) for g in population])

    sign = -1.0 if maximize else 1.0
    champ_pos = int(np.argmin(sign * fitnesses))
    champion = _copy_genome(population[champ_pos])
    champion_fitness = float(fitnesses[champ_pos])

    gens = config.generations
    best = np.empty(gens)
    mean = np.empty(gens)
    std = np.empty(gens)
    wallclock = np.empty(gens)

    for gen in range(gens):
        t0 = time.perf_counter()
        order = np.argsort(sign * fitnesses, kind="stable")
        next_pop = [_copy_genome(population[i]) for i in order[: config.elitism_count]]
        while len(next_pop) < config.population_size:
            parents = [
                population[
                    tournament_select(population, fitnesses, config.tournament_k,
                                      rng, maximize)
                ]
                for _ in range(op.m)
            ]
            child = _make_child(problem, op, weights, parents, rng)
            child = _mutate(problem, child, mutation, gen, rng)
            next_pop.append(child)
        population = next_pop
        fitnesses = np.array([_evaluate(problem, g) for g in population])

        gen_best = int(np.argmin(sign * fitnesses))
        if sign * fitnesses[gen_best] < sign * champion_fitness:
            champion = _copy_genome(population[gen_best])
            champion_fitness = float(fitnesses[gen_best])

        best[gen] = fitnesses[gen_best]
        mean[gen] = fitnesses.mean()
        std[gen] = fitnesses.std()
        wallclock[gen] = (time.perf_counter() - t0) * 1000.0

    return RunTrace(
        seed=config.seed,
        best=best,
        mean=mean,
        std=std,
        wallclock_ms=wallclock,
        champion=champion,
        champion_fitness=champion_fitness,
    )
