"""Joint power/modulation assignment on an interference channel.

Each of L links picks a transmit power and a modulation order from
{2, 4, 16, 64}. Link i sees

    SINR_i = g_ii P_i / (sum_{j != i} g_ij P_j + noise)

in linear scale, converted to dB. The reward is the summed log2
modulation order, minus beta times the total dB shortfall against the
per-modulation SINR thresholds:

    U = sum_i log2(M_i) - beta * sum_i max(0, gamma(M_i) - SINR_dB_i)

Maximization problem; a genome is feasible when the penalty term is
exactly zero. Instances come from generate_wireless: transmitter
positions uniform in the unit square, each receiver a fixed 0.05 away
from its transmitter, gains d^-3 with distances clamped below at 0.05
(so g_ii = 8000).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from ..operators import MODULATION_LEVELS

SINR_THRESHOLDS_DB = {2: 5.0, 4: 11.0, 16: 18.0, 64: 24.0}

_MIN_SPACING = 0.05
SCHEMA_VERSION = 1


@dataclass(eq=False)
class WirelessProblem:
    gains: np.ndarray
    noise: float = 1e-3
    power_bounds: tuple = (0.001, 1.0)
    beta: float = 100.0
    encoding: str = field(default="power_modulation", init=False)
    direction: str = field(default="max", init=False)

    def __post_init__(self):
        self.gains = np.asarray(self.gains, dtype=float)
        if self.gains.ndim != 2 or self.gains.shape[0] != self.gains.shape[1]:
            raise ConfigurationError(f"gain matrix must be square, got {self.gains.shape}")
        if np.any(self.gains <= 0):
            raise ConfigurationError("channel gains must be positive")
        if self.noise <= 0:
            raise ConfigurationError("noise power must be > 0")
        lo, hi = self.power_bounds
        if not 0 < lo < hi:
            raise ConfigurationError(f"power bounds must satisfy 0 < lo < hi, got {self.power_bounds}")
        if self.beta < 0:
            raise ConfigurationError("beta must be >= 0")
        self.n_links = self.gains.shape[0]
        self.power_lower = np.full(self.n_links, float(lo))
        self.power_upper = np.full(self.n_links, float(hi))
        self._levels = np.asarray(MODULATION_LEVELS, dtype=np.int64)
        self._thresholds = np.array([SINR_THRESHOLDS_DB[m] for m in MODULATION_LEVELS])
        self._bits = np.log2(self._levels.astype(float))

    def _check_genome(self, genome):
        powers, mods = genome
        powers = np.asarray(powers, dtype=float)
        mods = np.asarray(mods, dtype=np.int64)
        if powers.shape != (self.n_links,) or mods.shape != (self.n_links,):
            raise ConfigurationError(
                f"genome parts must both have length {self.n_links}"
            )
        if np.any(powers < self.power_lower - 1e-12) or np.any(powers > self.power_upper + 1e-12):
            raise ConfigurationError(f"powers {powers} outside bounds {self.power_bounds}")
        if not np.isin(mods, self._levels).all():
            raise ConfigurationError(f"modulations must be in {MODULATION_LEVELS}")
        return powers, mods

    def sinr_db(self, powers) -> np.ndarray:
        powers = np.asarray(powers, dtype=float)
        received = self.gains * powers[None, :]
        signal = np.diag(received)
        interference = received.sum(axis=1) - signal
        return 10.0 * np.log10(signal / (interference + self.noise))

    def total_penalty(self, genome) -> float:
        powers, mods = self._check_genome(genome)
        sinr = self.sinr_db(powers)
        idx = np.searchsorted(self._levels, mods)
        deficit = np.maximum(0.0, self._thresholds[idx] - sinr)
        return self.beta * float(deficit.sum())

    def evaluate(self, genome) -> float:
        powers, mods = self._check_genome(genome)
        sinr = self.sinr_db(powers)
        idx = np.searchsorted(self._levels, mods)
        deficit = np.maximum(0.0, self._thresholds[idx] - sinr)
        return float(self._bits[idx].sum()) - self.beta * float(deficit.sum())

    def feasible(self, genome) -> bool:
        """All modulation thresholds met: zero penalty."""
        powers, mods = self._check_genome(genome)
        sinr = self.sinr_db(powers)
        idx = np.searchsorted(self._levels, mods)
        return bool(np.all(sinr >= self._thresholds[idx]))

    def random_genome(self, rng: np.random.Generator):
        powers = rng.uniform(self.power_lower, self.power_upper)
        mods = rng.choice(self._levels, size=self.n_links)
        return powers, mods

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "wireless",
                "gain_matrix": self.gains.tolist(),
                "noise": self.noise,
                "power_bounds": list(self.power_bounds),
                "beta": self.beta,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "WirelessProblem":
        doc = json.loads(text)
        if doc.get("kind") != "wireless":
            raise ConfigurationError(f"not a wireless instance: kind={doc.get('kind')!r}")
        return cls(
            gains=np.asarray(doc["gain_matrix"], dtype=float),
            noise=float(doc["noise"]),
            power_bounds=tuple(doc["power_bounds"]),
            beta=float(doc.get("beta", 100.0)),
        )


def generate_wireless(links: int = 8, seed: int = 0, noise: float = 1e-3,
                      power_bounds=(0.001, 1.0), beta: float = 100.0) -> WirelessProblem:
    """Random interference instance: uniform transmitters in the unit
    square, receivers offset by 0.05, path-loss exponent 3 with the
    distance clamped below at 0.05."""
    if links < 2:
        raise ConfigurationError("need at least 2 links")
    rng = np.random.default_rng(seed)
    tx = rng.random((links, 2))
    angle = rng.uniform(0.0, 2.0 * math.pi, size=links)
    rx = tx + _MIN_SPACING * np.stack([np.cos(angle), np.sin(angle)], axis=1)
    dist = np.linalg.norm(rx[:, None, :] - tx[None, :, :], axis=2)
    dist = np.maximum(dist, _MIN_SPACING)
    gains = dist**-3.0
    return WirelessProblem(gains=gains, noise=noise, power_bounds=power_bounds, beta=beta)
