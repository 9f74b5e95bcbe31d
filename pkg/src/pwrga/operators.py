"""Recombination and mutation operators.

The multi-parent blend takes m tournament winners, shuffles their order,
and forms the offspring as the weighted sum with a symmetric binomial
weight vector (see pascal.py). Binary genomes mix in logit space; the
permutation variant selects alleles positionally by the same weights and
repairs duplicates by cheapest cyclic insertion. Two-parent baselines
(arithmetic, BLX-alpha, SBX, PMX) and the three-parent DE-style step are
kept here so every study runs through one code path.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError
from .pascal import WeightVector

# allele -> probability clamp for logit-space mixing of hard bits
LOGIT_EPS = 0.01

# modulation alphabet for the power/modulation genome, log2 sizes 1,2,4,6
MODULATION_LEVELS = (2, 4, 16, 64)

OPERATOR_KINDS = ("pwr", "arith", "blx", "sbx", "de", "pmx")


@dataclass
class OperatorSpec:
    """Which recombination to run and with what knobs."""

    kind: str = "pwr"
    m: int = 3
    weight_shape: str = "pascal"  # pascal | equal | dirichlet (pwr only)
    alpha: float = 0.3            # BLX interval extension
    eta: float = 15.0             # SBX distribution index
    f_weight: float = 0.5         # DE differential weight

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ConfigurationError(
                f"unknown operator kind {self.kind!r}, expected one of {OPERATOR_KINDS}"
            )
        if self.kind in ("arith", "blx", "sbx", "pmx") and self.m != 2:
            raise ConfigurationError(f"{self.kind} takes exactly 2 parents, got m={self.m}")
        if self.kind == "de" and self.m != 3:
            raise ConfigurationError(f"de takes exactly 3 parents, got m={self.m}")
        if self.kind == "pwr" and self.m < 2:
            raise ConfigurationError(f"pwr needs m >= 2, got m={self.m}")
        if self.weight_shape not in ("pascal", "equal", "dirichlet"):
            raise ConfigurationError(f"unknown weight shape {self.weight_shape!r}")
        if self.alpha < 0:
            raise ConfigurationError("alpha must be >= 0")
        if self.eta <= 0:
            raise ConfigurationError("eta must be > 0")
        if self.f_weight <= 0:
            raise ConfigurationError("f_weight must be > 0")


@dataclass
class MutationSpec:
    """Per-gene Gaussian mutation with a geometric sigma schedule.

    sigma at generation g is sigma0 * decay**g, as a fraction of the
    per-gene range. decay=None lets the engine pick (0.1)**(1/generations)
    so sigma lands at a tenth of sigma0 by the final generation.
    swap_rate drives permutation swaps, flip_rate the modulation alphabet
    flips (falls back to rate when unset).
    """

    rate: float = 0.2
    sigma0: float = 0.1
    decay: Optional[float] = None
    swap_rate: float = 0.25
    flip_rate: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.rate <= 1.0:
            raise ConfigurationError(f"rate must be in [0, 1], got {self.rate}")
        if self.sigma0 < 0.0:
            raise ConfigurationError("sigma0 must be >= 0")
        if self.decay is not None and not 0.0 < self.decay <= 1.0:
            raise ConfigurationError(f"decay must be in (0, 1], got {self.decay}")
        if not 0.0 <= self.swap_rate <= 1.0:
            raise ConfigurationError("swap_rate must be in [0, 1]")
        if self.flip_rate is not None and not 0.0 <= self.flip_rate <= 1.0:
            raise ConfigurationError("flip_rate must be in [0, 1]")


def _stack_parents(parents: Sequence, weights: WeightVector, dtype=float) -> np.ndarray:
    if len(parents) != weights.m:
        raise ConfigurationError(
            f"got {len(parents)} parents for a weight vector with m={weights.m}"
        )
    arrs = [np.asarray(p, dtype=dtype) for p in parents]
    dims = {a.shape for a in arrs}
    if len(dims) != 1:
        raise ConfigurationError(f"parent shapes differ: {sorted(dims)}")
    (shape,) = dims
    if len(shape) != 1 or shape[0] < 1:
        raise ConfigurationError(f"parents must be non-empty 1-d vectors, got shape {shape}")
    return np.stack(arrs)


def pwr_real(parents: Sequence[np.ndarray], weights: WeightVector,
             rng: np.random.Generator) -> np.ndarray:
    """Weighted sum of m real parents after a random order shuffle.

    Convexity of the weights keeps every gene inside the parents' hull,
    so no bound clamping is needed downstream.
    """
    stacked = _stack_parents(parents, weights)
    order = rng.permutation(weights.m)
    return weights.weights @ stacked[order]


def logit_mix_probability(parents: Sequence[np.ndarray], weights: WeightVector,
                          eps: float = LOGIT_EPS) -> np.ndarray:
    """Per-gene Bernoulli parameter from slot-aligned bit parents.

    Bits map to probabilities {eps, 1-eps}, are mixed as logits with the
    given weights, and squashed back. Unanimous columns return eps or
    1-eps exactly (the weights sum to 1).
    """
    if not 0.0 < eps < 0.5:
        raise ConfigurationError(f"eps must be in (0, 0.5), got {eps}")
    stacked = _stack_parents(parents, weights)
    if not np.isin(stacked, (0.0, 1.0)).all():
        raise ConfigurationError("bit parents must contain only 0/1 alleles")
    probs = np.where(stacked > 0.5, 1.0 - eps, eps)
    logits = np.log(probs / (1.0 - probs))
    mixed = weights.weights @ logits
    return 1.0 / (1.0 + np.exp(-mixed))


def pwr_logit(parents: Sequence[np.ndarray], weights: WeightVector,
              rng: np.random.Generator, eps: float = LOGIT_EPS) -> np.ndarray:
    """Logit-space blend of bit parents, sampled back to hard bits."""
    order = rng.permutation(weights.m)
    shuffled = [parents[i] for i in order]
    p_child = logit_mix_probability(shuffled, weights, eps)
    return (rng.random(p_child.size) < p_child).astype(np.int8)


def weighted_allele_selection(parents: Sequence[np.ndarray], weights: WeightVector,
                              rng: np.random.Generator) -> np.ndarray:
    """Stage 1 of the permutation blend: per position, draw a parent slot
    i ~ Categorical(weights) and copy its allele. Output may repeat values."""
    stacked = _stack_parents(parents, weights, dtype=np.int64)
    n = stacked.shape[1]
    slots = rng.choice(weights.m, size=n, p=weights.weights)
    return stacked[slots, np.arange(n)]


def repair_permutation(provisional: np.ndarray, distance: np.ndarray) -> np.ndarray:
    """Stage 2: turn a duplicate-bearing allele string into a permutation.

    The first occurrence of each value stays put; later duplicates become
    holes. Missing values are inserted in ascending order, each into the
    hole whose cyclic incremental cost d(prev,e)+d(e,next)-d(prev,next)
    over the currently filled positions is minimal (ties: lowest hole
    index). Every non-hole position is untouched.
    """
    prov = np.asarray(provisional, dtype=np.int64)
    n = prov.size
    distance = np.asarray(distance, dtype=float)
    if distance.shape != (n, n):
        raise ConfigurationError(
            f"distance matrix shape {distance.shape} does not match length {n}"
        )
    if prov.min() < 0 or prov.max() >= n:
        raise ConfigurationError("alleles must lie in [0, n)")
    out = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    holes = []
    for k in range(n):
        v = prov[k]
        if seen[v]:
            holes.append(k)
        else:
            seen[v] = True
            out[k] = v
    if not holes:
        return out
    filled = [k for k in range(n) if out[k] >= 0]
    for e in np.flatnonzero(~seen):
        best_hole = -1
        best_cost = np.inf
        for h in holes:
            i = bisect.bisect_left(filled, h)
            prev_pos = filled[i - 1]                      # wraps at i == 0
            next_pos = filled[i] if i < len(filled) else filled[0]
            a = out[prev_pos]
            b = out[next_pos]
            cost = distance[a, e] + distance[e, b] - distance[a, b]
            if cost < best_cost:
                best_cost = cost
                best_hole = h
        out[best_hole] = e
        bisect.insort(filled, best_hole)
        holes.remove(best_hole)
    return out


def pwr_permutation(parents: Sequence[np.ndarray], weights: WeightVector,
                    distance: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Two-stage permutation blend: weighted allele selection, then repair."""
    for p in parents:
        _check_permutation(np.asarray(p))
    provisional = weighted_allele_selection(parents, weights, rng)
    return repair_permutation(provisional, distance)


def pwr_power_modulation(parents: Sequence[tuple], weights: WeightVector,
                         rng: np.random.Generator) -> tuple:
    """Paired-genome blend: weighted sum on the power vector, weighted
    categorical allele selection on the modulation vector, one shared
    parent shuffle for both parts."""
    if len(parents) != weights.m:
        raise ConfigurationError(
            f"got {len(parents)} parents for a weight vector with m={weights.m}"
        )
    order = rng.permutation(weights.m)
    powers = np.stack([np.asarray(parents[i][0], dtype=float) for i in order])
    mods = np.stack([np.asarray(parents[i][1], dtype=np.int64) for i in order])
    child_p = weights.weights @ powers
    n = mods.shape[1]
    slots = rng.choice(weights.m, size=n, p=weights.weights)
    child_m = mods[slots, np.arange(n)]
    return child_p, child_m


def _two_real(p1, p2):
    a = np.asarray(p1, dtype=float)
    b = np.asarray(p2, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ConfigurationError(f"parent shapes differ: {a.shape} vs {b.shape}")
    return a, b


def _clamp(x, bounds):
    if bounds is None:
        return x
    lo, hi = bounds
    return np.clip(x, lo, hi)


def crossover_arithmetic(p1, p2, rng: np.random.Generator,
                         lam: Optional[float] = None) -> np.ndarray:
    """Whole-vector blend lam*p1 + (1-lam)*p2 with one lam ~ U(0,1) per
    offspring. lam is a test hook."""
    a, b = _two_real(p1, p2)
    if lam is None:
        lam = rng.random()
    return lam * a + (1.0 - lam) * b


def crossover_blx(p1, p2, alpha: float, rng: np.random.Generator,
                  bounds=None) -> np.ndarray:
    """BLX-alpha: per gene, uniform draw from the parent interval extended
    by alpha times its width on both sides, then clamped to bounds."""
    if alpha < 0:
        raise ConfigurationError("alpha must be >= 0")
    a, b = _two_real(p1, p2)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    spread = alpha * (hi - lo)
    low = lo - spread
    width = (hi + spread) - low
    child = low + rng.random(a.size) * width
    return _clamp(child, bounds)


def crossover_sbx(p1, p2, eta: float, rng: np.random.Generator,
                  bounds=None, u: Optional[float] = None):
    """Simulated binary crossover. Returns both children; their per-gene
    mean equals the parents' mean before clamping. u is a test hook."""
    if eta <= 0:
        raise ConfigurationError("eta must be > 0")
    a, b = _two_real(p1, p2)
    if u is None:
        uu = rng.random(a.size)
    else:
        if not 0.0 <= u < 1.0:
            raise ConfigurationError("forced u must be in [0, 1)")
        uu = np.full(a.size, float(u))
    exponent = 1.0 / (eta + 1.0)
    beta = np.where(
        uu <= 0.5,
        (2.0 * uu) ** exponent,
        (1.0 / (2.0 * (1.0 - uu))) ** exponent,
    )
    c1 = 0.5 * ((1.0 + beta) * a + (1.0 - beta) * b)
    c2 = 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b)
    return _clamp(c1, bounds), _clamp(c2, bounds)


def de_style_step(p1, p2, p3, f_weight: float = 0.5, bounds=None) -> np.ndarray:
    """Differential step p1 + F*(p2 - p3), clamped to bounds."""
    if f_weight <= 0:
        raise ConfigurationError("f_weight must be > 0")
    a, b = _two_real(p1, p2)
    c = np.asarray(p3, dtype=float)
    if c.shape != a.shape:
        raise ConfigurationError(f"parent shapes differ: {a.shape} vs {c.shape}")
    return _clamp(a + f_weight * (b - c), bounds)


def _check_permutation(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    n = p.size
    if n < 2 or p.min() < 0 or p.max() >= n or np.bincount(p, minlength=n).max() != 1:
        raise ConfigurationError(f"not a permutation of 0..{n - 1}: {p!r}")
    return p


def crossover_pmx(p1, p2, rng: np.random.Generator, cuts=None) -> np.ndarray:
    """Partially mapped crossover. A segment between two uniform cut points
    is copied from p1; remaining positions come from p2, conflicts resolved
    through the p1->p2 position mapping chain. cuts is a test hook."""
    a = _check_permutation(p1)
    b = _check_permutation(p2)
    if a.size != b.size:
        raise ConfigurationError("parents must have equal length")
    n = a.size
    if cuts is None:
        lo, hi = np.sort(rng.integers(0, n + 1, size=2))
    else:
        lo, hi = cuts
        if not 0 <= lo <= hi <= n:
            raise ConfigurationError(f"cuts must satisfy 0 <= lo <= hi <= {n}")
    child = np.full(n, -1, dtype=np.int64)
    child[lo:hi] = a[lo:hi]
    placed = np.zeros(n, dtype=bool)
    placed[a[lo:hi]] = True
    pos_in_b = np.empty(n, dtype=np.int64)
    pos_in_b[b] = np.arange(n)
    for i in range(lo, hi):
        v = b[i]
        if placed[v]:
            continue
        j = i
        while lo <= j < hi:
            j = pos_in_b[a[j]]
        child[j] = v
        placed[v] = True
    for i in np.flatnonzero(child < 0):
        child[i] = b[i]
    return child


def resolve_decay(spec: MutationSpec, generations: int) -> float:
    """None -> sigma reaches 0.1*sigma0 at the final generation."""
    if spec.decay is not None:
        return spec.decay
    if generations <= 1:
        return 1.0
    return 0.1 ** (1.0 / generations)


def mutate_real(genome, spec: MutationSpec, generation: int, bounds,
                rng: np.random.Generator) -> np.ndarray:
    """Per-gene Gaussian mutation, sigma scaled by the gene's range and
    decayed geometrically per generation, result clamped to bounds."""
    g = np.asarray(genome, dtype=float)
    lo, hi = bounds
    lo = np.broadcast_to(np.asarray(lo, dtype=float), g.shape)
    hi = np.broadcast_to(np.asarray(hi, dtype=float), g.shape)
    if generation < 0:
        raise ConfigurationError("generation must be >= 0")
    decay = spec.decay if spec.decay is not None else 1.0
    sigma = spec.sigma0 * decay**generation
    mask = rng.random(g.size) < spec.rate
    noise = rng.standard_normal(g.size) * sigma * (hi - lo)
    return np.clip(np.where(mask, g + noise, g), lo, hi)


def mutate_swap(genome, swap_rate: float, rng: np.random.Generator) -> np.ndarray:
    """With probability swap_rate, swap two distinct tour positions."""
    if not 0.0 <= swap_rate <= 1.0:
        raise ConfigurationError("swap_rate must be in [0, 1]")
    p = np.asarray(genome, dtype=np.int64).copy()
    if rng.random() < swap_rate:
        i, j = rng.choice(p.size, size=2, replace=False)
        p[i], p[j] = p[j], p[i]
    return p


def mutate_bitflip(genome, rate: float, rng: np.random.Generator) -> np.ndarray:
    g = np.asarray(genome, dtype=np.int8).copy()
    mask = rng.random(g.size) < rate
    g[mask] ^= 1
    return g


def mutate_modulation(genome, flip_rate: float, rng: np.random.Generator) -> np.ndarray:
    """Per entry, with probability flip_rate replace the modulation order
    with a uniformly chosen different member of MODULATION_LEVELS."""
    if not 0.0 <= flip_rate <= 1.0:
        raise ConfigurationError("flip_rate must be in [0, 1]")
    levels = np.asarray(MODULATION_LEVELS, dtype=np.int64)
    g = np.asarray(genome, dtype=np.int64)
    if not np.isin(g, levels).all():
        raise ConfigurationError(f"modulation entries must be in {MODULATION_LEVELS}")
    idx = np.searchsorted(levels, g)
    mask = rng.random(g.size) < flip_rate
    steps = rng.integers(1, levels.size, size=g.size)
    return np.where(mask, levels[(idx + steps) % levels.size], g)
