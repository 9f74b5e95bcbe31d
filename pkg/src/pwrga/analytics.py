"""Run-set summaries, Friedman/Nemenyi ranking, and overhead reporting.

The Friedman statistic is computed from average ranks with ties resolved
by mid-rank assignment:

    chi2_F = 12 N / (k (k+1)) * [ sum_j Rbar_j^2 - k (k+1)^2 / 4 ]

for N tasks (blocks) and k methods, and the Nemenyi critical difference is

    CD = q_{0.05,k} * sqrt( k (k+1) / (6 N) )

with the two-tailed studentized-range quantiles (alpha = 0.05, infinite
degrees of freedom) embedded below for k = 2..10.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, IncompleteDesignError, InsufficientDataError

# q_{0.05, k} for k = 2..10 (studentized range / sqrt(2), infinite dof)
NEMENYI_Q_05 = {
    2: 1.960,
    3: 2.343,
    4: 2.569,
    5: 2.728,
    6: 2.850,
    7: 2.949,
    8: 3.031,
    9: 3.102,
    10: 3.164,
}


@dataclass
class RankSummary:
    methods: list
    mean_ranks: np.ndarray
    friedman_statistic: float
    nemenyi_cd: float
    n_tasks: int

    def __post_init__(self):
        k = len(self.methods)
        self.mean_ranks = np.asarray(self.mean_ranks, dtype=float)
        if self.mean_ranks.shape != (k,):
            raise ConfigurationError("one mean rank per method required")
        if np.any(self.mean_ranks < 1.0 - 1e-9) or np.any(
            self.mean_ranks > k + 1e-9
        ):
            raise ConfigurationError("mean ranks must lie within [1, k]")
        total = float(self.mean_ranks.sum())
        if abs(total - k * (k + 1) / 2) > 1e-9:
            raise ConfigurationError(
                f"mean ranks must sum to k(k+1)/2, got {total}"
            )


def summarize(values) -> tuple[float, float, float, float]:
    """(median, mean, sample std, IQR) of a run set.

    Median averages the two middles for even n; quartiles use linear
    interpolation; std uses the n-1 divisor.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ConfigurationError(f"expected a flat run set, got shape {arr.shape}")
    if arr.size < 2:
        raise InsufficientDataError(
            f"need at least 2 runs to summarize, got {arr.size}"
        )
    arr = np.sort(arr)  # make every statistic bit-for-bit order-invariant
    q1, q3 = np.percentile(arr, [25, 75])
    return (
        float(np.median(arr)),
        float(arr.mean()),
        float(arr.std(ddof=1)),
        float(q3 - q1),
    )


def _average_ranks(row: np.ndarray) -> np.ndarray:
    """Rank a score row ascending (best = 1), ties get the mid-rank."""
    order = np.argsort(row, kind="stable")
    ranks = np.empty(row.size, dtype=float)
    i = 0
    while i < row.size:
        j = i
        while j + 1 < row.size and row[order[j + 1]] == row[order[i]]:
            j += 1
        # positions i..j (0-based) share the average of ranks i+1..j+1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def friedman_nemenyi(matrix, methods=None, directions=None) -> RankSummary:
    """Friedman test with Nemenyi critical difference over a tasks x methods
    score matrix.

    `directions` gives one of 'min'/'max' per task (row); 'max' rows are
    negated before ranking so rank 1 is always the best method.
    """
    scores = np.asarray(matrix, dtype=float)
    if scores.ndim != 2:
        raise ConfigurationError(f"expected tasks x methods matrix, got {scores.ndim}D")
    n_tasks, k = scores.shape
    if k < 2 or n_tasks < 2:
        raise InsufficientDataError(
            f"need >= 2 methods and >= 2 tasks, got {k} x {n_tasks}"
        )
    if np.isnan(scores).any():
        rows, cols = np.nonzero(np.isnan(scores))
        raise IncompleteDesignError(
            (f"task {r}", f"method {c}") for r, c in zip(rows, cols)
        )
    if methods is None:
        methods = [f"method_{j}" for j in range(k)]
    if len(methods) != k:
        raise ConfigurationError("one method label per column required")
    if directions is None:
        directions = ["min"] * n_tasks
    if len(directions) != n_tasks:
        raise ConfigurationError("one direction per task required")

    ranks = np.empty_like(scores)
    for i, direction in enumerate(directions):
        if direction not in ("min", "max"):
            raise ConfigurationError(f"direction must be 'min' or 'max', got {direction!r}")
        row = -scores[i] if direction == "max" else scores[i]
        ranks[i] = _average_ranks(row)

    mean_ranks = ranks.mean(axis=0)
    chi2 = (12 * n_tasks / (k * (k + 1))) * (
        float(np.sum(mean_ranks**2)) - k * (k + 1) ** 2 / 4
    )
    if k not in NEMENYI_Q_05:
        raise ConfigurationError(
            f"Nemenyi quantile table covers k in [2, 10], got {k}"
        )
    cd = NEMENYI_Q_05[k] * math.sqrt(k * (k + 1) / (6 * n_tasks))
    return RankSummary(
        methods=list(methods),
        mean_ranks=mean_ranks,
        friedman_statistic=float(chi2),
        nemenyi_cd=float(cd),
        n_tasks=n_tasks,
    )


def overhead_report(wallclocks: dict, baseline: str) -> dict:
    """Median per-generation wallclock of each method relative to a
    two-parent baseline.

    `wallclocks` maps method name -> per-generation millisecond samples
    (flattened across runs).
    """
    if baseline not in wallclocks:
        raise ConfigurationError(f"baseline method {baseline!r} missing from report input")
    base = float(np.median(np.asarray(wallclocks[baseline], dtype=float)))
    if base <= 0:
        raise ConfigurationError("baseline median wallclock must be positive")
    return {
        name: float(np.median(np.asarray(samples, dtype=float))) / base
        for name, samples in wallclocks.items()
    }
