"""Symmetric Euclidean TSP on unit-square cities."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError

SCHEMA_VERSION = 1


@dataclass(eq=False)
class TspProblem:
    coords: np.ndarray
    encoding: str = field(default="permutation", init=False)
    direction: str = field(default="min", init=False)

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float)
        if self.coords.ndim != 2 or self.coords.shape[1] != 2:
            raise ConfigurationError(f"coords must be (n, 2), got {self.coords.shape}")
        self.n_cities = self.coords.shape[0]
        if self.n_cities < 3:
            raise ConfigurationError("need at least 3 cities")
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        self.distance = np.linalg.norm(diff, axis=2)

    def evaluate(self, perm) -> float:
        return tour_length(perm, self)

    def random_genome(self, rng: np.random.Generator) -> np.ndarray:
        return rng.permutation(self.n_cities)

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "tsp",
                "coords": self.coords.tolist(),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "TspProblem":
        doc = json.loads(text)
        if doc.get("kind") != "tsp":
            raise ConfigurationError(f"not a tsp instance: kind={doc.get('kind')!r}")
        return cls(coords=np.asarray(doc["coords"], dtype=float))


def tour_length(perm, problem: TspProblem) -> float:
    """Cyclic tour length, wrapping from the last city back to the first."""
    p = np.asarray(perm, dtype=np.int64)
    n = problem.n_cities
    if p.shape != (n,) or np.bincount(p, minlength=n).max() != 1 or p.min() < 0:
        raise ConfigurationError(f"not a permutation of 0..{n - 1}: {p!r}")
    return float(problem.distance[p, np.roll(p, -1)].sum())


def generate_tsp(n: int = 32, seed: int = 0) -> TspProblem:
    """n uniform cities in the unit square."""
    if n < 3:
        raise ConfigurationError("need at least 3 cities")
    rng = np.random.default_rng(seed)
    return TspProblem(coords=rng.random((n, 2)))
