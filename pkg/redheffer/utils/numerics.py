"""Exactly rounded accumulation helpers and the zeta values in use."""

import math

import numpy as np
from numpy.typing import ArrayLike

ZETA2 = 1.644934066848226  # pi^2 / 6
ZETA3 = 1.202056903159594  # Apery's constant


def exact_sum(values: ArrayLike) -> float:
    """Sum with math.fsum (exactly rounded, independent of order)."""
    return math.fsum(np.asarray(values, dtype=np.float64).ravel().tolist())


def exact_dot(x: ArrayLike, y: ArrayLike) -> float:
    """Inner product with the products accumulated by exact_sum.

    Products are rounded once each; the accumulation adds no further error.
    """
    return exact_sum(np.multiply(x, y, dtype=np.float64))


def exact_norm(x: ArrayLike) -> float:
    """Euclidean norm built on exact_dot."""
    return math.sqrt(exact_dot(x, x))
