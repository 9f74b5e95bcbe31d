"""Linear-phase FIR lowpass design objective.

Type-I filter with 21 taps: the genome holds the 11 free coefficients
x = h[0..10] and the rest mirrors, h[n] = h[20-n]. The cost is a weighted
least-squares fit of |H(w)| to an ideal lowpass with cutoff 0.35*pi on an
inclusive uniform grid over [0, pi] (stopband errors weighted double)
plus an L2 ridge on the full tap vector:

    J = (1/N) sum_k W(w_k) (|H(w_k)| - D(w_k))^2 + ridge * ||h||^2
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError


@dataclass(eq=False)
class FirProblem:
    taps: int = 21
    cutoff: float = 0.35 * math.pi
    grid_size: int = 512
    stop_weight: float = 2.0
    ridge: float = 1e-4
    coeff_bound: float = 1.0
    encoding: str = field(default="real", init=False)
    direction: str = field(default="min", init=False)

    def __post_init__(self):
        if self.taps < 3 or self.taps % 2 == 0:
            raise ConfigurationError("taps must be odd and >= 3 (type-I symmetry)")
        if not 0.0 < self.cutoff < math.pi:
            raise ConfigurationError("cutoff must lie in (0, pi)")
        if self.grid_size < 8:
            raise ConfigurationError("grid_size must be >= 8")
        self.n_free = (self.taps + 1) // 2
        self.lower = np.full(self.n_free, -self.coeff_bound)
        self.upper = np.full(self.n_free, self.coeff_bound)
        self.omega = np.linspace(0.0, math.pi, self.grid_size)
        self.desired = (self.omega <= self.cutoff).astype(float)
        self.weight = np.where(self.omega <= self.cutoff, 1.0, self.stop_weight)
        # DTFT matrix: row k holds exp(-j w_k n) for n = 0..taps-1
        self._dtft = np.exp(-1j * np.outer(self.omega, np.arange(self.taps)))

    def expand(self, x) -> np.ndarray:
        """Free coefficients -> full symmetric tap vector."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_free,):
            raise ConfigurationError(
                f"expected {self.n_free} free coefficients, got shape {x.shape}"
            )
        return np.concatenate([x, x[-2::-1]])

    def magnitude_response(self, x) -> np.ndarray:
        return np.abs(self._dtft @ self.expand(x))

    def evaluate(self, x) -> float:
        h = self.expand(x)
        mag = np.abs(self._dtft @ h)
        err = mag - self.desired
        fit = float(np.mean(self.weight * err * err))
        return fit + self.ridge * float(h @ h)

    def random_genome(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)
