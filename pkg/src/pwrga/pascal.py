"""Combinatorics behind binomially weighted recombination.

A row of Pascal's triangle, normalized by its sum 2**(m-1), gives the
weight vector used to blend m parents:

    w_i = C(m-1, i-1) / 2**(m-1),   i = 1..m

Blending i.i.d. parents with any convex weights contracts variance by
sum(w_i^2); for Pascal weights the Vandermonde identity collapses that
sum to a central binomial coefficient,

    sum_i C(m-1, i)^2 = C(2m-2, m-1)
    =>  sigma_o^2 / sigma_p^2 = C(2m-2, m-1) / 4**(m-1).

The same weights are the Bernstein basis of degree m-1 evaluated at
t = 1/2, and summing Pascal's triangle along shallow diagonals yields
Fibonacci numbers: F_{n+1} = sum_k C(n-k, k). Both identities are kept
here because they are cheap, exact cross-checks on the binomial code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigurationError

# Weight vectors beyond 64 parents have entries whose integer numerators
# exceed what a float can carry without drifting past the stated
# tolerances, and no experiment goes anywhere near that arity.
MAX_PARENTS = 64
MAX_BERNSTEIN_DEGREE = MAX_PARENTS - 1
MAX_FIB_INDEX = 90


class WeightShape(str, Enum):
    PASCAL = "pascal"
    EQUAL = "equal"
    DIRICHLET = "dirichlet"


@dataclass(eq=False)
class WeightVector:
    """A validated convex weight vector over m parent slots."""

    weights: np.ndarray
    shape: WeightShape
    m: int = field(default=0)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.m == 0:
            self.m = self.weights.size
        if self.m < 2:
            raise ConfigurationError(f"need at least 2 parents, got m={self.m}")
        if self.weights.size != self.m:
            raise ConfigurationError(
                f"weight vector length {self.weights.size} != m={self.m}"
            )
        if np.any(self.weights < 0.0):
            raise ConfigurationError("weights must be non-negative")
        total = math.fsum(self.weights.tolist())
        if abs(total - 1.0) > 1e-12:
            raise ConfigurationError(f"weights sum to {total!r}, not 1")
        if self.shape is WeightShape.PASCAL:
            w = self.weights
            if not np.array_equal(w, w[::-1]):
                raise ConfigurationError("pascal weights must be symmetric")
            d = np.diff(w)
            peak = int(np.argmax(w))
            if np.any(d[:peak] < 0) or np.any(d[peak:] > 0):
                raise ConfigurationError("pascal weights must be unimodal")

    def __len__(self):
        return self.m


def _check_parent_count(m: int) -> None:
    if not isinstance(m, (int, np.integer)):
        raise ConfigurationError(f"parent count must be an integer, got {m!r}")
    if m < 2:
        raise ConfigurationError(f"invalid parent count m={m}, need m >= 2")
    if m > MAX_PARENTS:
        raise ConfigurationError(
            f"unsupported parent count m={m}, max is {MAX_PARENTS}"
        )


def pascal_weights(m: int) -> WeightVector:
    """Row m-1 of Pascal's triangle normalized to sum 1.

    Entries are dyadic rationals C(m-1, i)/2**(m-1); each float is the
    correctly rounded value of the exact fraction, so the vector is
    symmetric bit-for-bit.
    """
    _check_parent_count(m)
    denom = 1 << (m - 1)
    w = np.array([math.comb(m - 1, i) / denom for i in range(m)])
    return WeightVector(w, WeightShape.PASCAL, m)


def equal_weights(m: int) -> WeightVector:
    _check_parent_count(m)
    return WeightVector(np.full(m, 1.0 / m), WeightShape.EQUAL, m)


def dirichlet_weights(m: int, rng: np.random.Generator) -> WeightVector:
    """A fresh flat-Dirichlet draw (alpha = 1) over m slots."""
    _check_parent_count(m)
    return WeightVector(rng.dirichlet(np.ones(m)), WeightShape.DIRICHLET, m)


def variance_ratio(m: int) -> float:
    """Offspring/parent variance ratio of Pascal blending, C(2m-2, m-1)/4**(m-1)."""
    _check_parent_count(m)
    return math.comb(2 * m - 2, m - 1) / 4 ** (m - 1)


def bernstein_basis(degree: int, t: float) -> np.ndarray:
    """All degree+1 Bernstein polynomials B_{i,degree}(t) = C(n,i) t^i (1-t)^(n-i)."""
    if degree < 0 or degree > MAX_BERNSTEIN_DEGREE:
        raise ConfigurationError(
            f"degree must be in [0, {MAX_BERNSTEIN_DEGREE}], got {degree}"
        )
    if not 0.0 <= t <= 1.0:
        raise ConfigurationError(f"t must be in [0, 1], got {t!r}")
    i = np.arange(degree + 1)
    combs = np.array([math.comb(degree, k) for k in i], dtype=float)
    # 0**0 == 1 covers the endpoints.
    return combs * t**i * (1.0 - t) ** (degree - i)


def fibonacci_diagonal(n: int) -> int:
    """F_{n+1} as the shallow-diagonal sum sum_{k<=n/2} C(n-k, k). Exact int."""
    if n < 0 or n > MAX_FIB_INDEX:
        raise ConfigurationError(f"n must be in [0, {MAX_FIB_INDEX}], got {n}")
    return sum(math.comb(n - k, k) for k in range(n // 2 + 1))
