"""Sum-of-squares toy objective, handy for engine smoke checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError


@dataclass(eq=False)
class SphereProblem:
    dim: int = 5
    bound: float = 1.0
    encoding: str = field(default="real", init=False)
    direction: str = field(default="min", init=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigurationError("dim must be >= 1")
        if self.bound <= 0:
            raise ConfigurationError("bound must be > 0")
        self.lower = np.full(self.dim, -self.bound)
        self.upper = np.full(self.dim, self.bound)

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ x)

    def random_genome(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)
