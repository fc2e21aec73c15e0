"""Small reference models with closed-form spectral curves."""
from __future__ import annotations

from .model import LinearRepresentation


def bernoulli(p: float) -> LinearRepresentation:
    """One state: each symbol is a with probability p, independently."""
    return LinearRepresentation([1.0], [[p]], [[1.0 - p]], [1.0])


def uniform_two_state() -> LinearRepresentation:
    """Every word has weight 2, so Y_n is Binomial(n, 1/2); y(t) = e^t + 1."""
    return LinearRepresentation([1.0, 1.0], [[1.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 1.0]], [1.0, 1.0])


def golden_ratio() -> LinearRepresentation:
    """A+B = [[1,1],[1,0]]; y(t) = (1 + sqrt(1 + 4 e^{2t})) / 2, lambda_A = lambda_B = 1."""
    return LinearRepresentation([1.0, 1.0], [[0.0, 1.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]], [1.0, 1.0])


def nilpotent_b() -> LinearRepresentation:
    """B is nilpotent, so U > 0: y(t) = e^t + sqrt(e^{2t} + e^t) and beta(t) -> 1/2 as t -> -inf."""
    return LinearRepresentation([1.0, 1.0], [[1.0, 1.0], [1.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]], [1.0, 1.0])


def swap() -> LinearRepresentation:
    """A+B is the 2-periodic swap matrix; not primitive."""
    return LinearRepresentation([1.0, 1.0], [[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]], [1.0, 1.0])


#: The three models every property and acceptance check runs on.
def reference_models() -> dict[str, LinearRepresentation]:
    return {"bernoulli0.3": bernoulli(0.3), "uniform": uniform_two_state(), "golden": golden_ratio()}
