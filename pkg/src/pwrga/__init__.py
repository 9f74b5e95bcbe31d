"""Pascal-weighted multi-parent recombination and a small benchmark harness."""

from .pascal import (
    WeightShape,
    WeightVector,
    bernstein_basis,
    dirichlet_weights,
    equal_weights,
    fibonacci_diagonal,
    pascal_weights,
    variance_ratio,
)

__all__ = [
    "WeightShape",
    "WeightVector",
    "bernstein_basis",
    "dirichlet_weights",
    "equal_weights",
    "fibonacci_diagonal",
    "pascal_weights",
    "variance_ratio",
]

__version__ = "0.1.0"
