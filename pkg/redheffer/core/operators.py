"""Matrix-free Redheffer operators.

This module applies A_n, its transpose and the Gram operator A_n^T A_n
without storing a matrix, evaluates the dense gcd-divisor matrix
B_n = (sigma0(gcd(i, j))) row by row, and computes exact determinants by
fraction-free elimination.
"""

import math
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from ..data.models import DivisorTables, GcdConstants
from ..utils.logger import get_logger
from ..utils.numerics import exact_sum
from ..utils.validators import ValidationError, require, validate_dimension, validate_vector_length
from ..utils.workers import WorkerMap, split_range
from .number_theory import divisors

logger = get_logger(__name__)

# Exact elimination is O(n^3) on big integers
DETERMINANT_GUARD = 300
# Dense B application is O(n^2) gcd evaluations
DENSE_B_GUARD = 5000


class SizeGuardError(RuntimeError):
    """Raised when a hard size guard is exceeded without force."""

    pass


class RedhefferOperator:
    """Implicit A_n: entry (i, j) is 1 iff j = 1 or i divides j.

    Vectors are 0-based arrays of length n; position k - 1 holds index k.
    Every application costs O(n log n) and writes each output entry once.
    """

    def __init__(self, n: int, tables: DivisorTables) -> None:
        """Initialize operator.

        Args:
            n: Dimension
            tables: Sieve tables covering n

        Raises:
            ValidationError: If n < 1 or the tables are too small
        """
        require(validate_dimension(n))
        if not tables.covers(n):
            raise ValidationError(f"tables cover 1..{tables.n}, dimension {n} requested")
        self.n = int(n)
        self.tables = tables
        self._root = isqrt(self.n)

    def entry(self, i: int, j: int) -> int:
        """Entry (i, j) of A_n, 1-based."""
        self._check_index(i)
        self._check_index(j)
        return 1 if j == 1 or j % i == 0 else 0

    def to_dense(self) -> np.ndarray:
        """Materialize A_n as an int64 array (small n only)."""
        idx = np.arange(1, self.n + 1, dtype=np.int64)
        dense = (idx[None, :] % idx[:, None] == 0) | (idx[None, :] == 1)
        return dense.astype(np.int64)

    def apply_forward(self, x: ArrayLike) -> np.ndarray:
        """A_n x.

        result[1] = sum of x; result[i] = x[1] + sum_{m >= 1} x[i m] for i >= 2.
        """
        xp = self._padded(x)
        n, root = self.n, self._root
        out = np.zeros(n + 1, dtype=np.float64)
        for i in range(2, root + 1):
            out[i] = xp[i::i].sum()
        for m in range(1, n // (root + 1) + 1):
            rows = np.arange(max(root + 1, 2), n // m + 1, dtype=np.int64)
            out[rows] += xp[m * rows]
        out[2:] += xp[1]
        out[1] = xp[1:].sum()
        return out[1:]

    def apply_transpose(self, x: ArrayLike) -> np.ndarray:
        """A_n^T x.

        result[1] = sum of x; result[j] = sum_{d | j} x[d] for j >= 2.
        """
        xp = self._padded(x)
        n, root = self.n, self._root
        out = np.zeros(n + 1, dtype=np.float64)
        for d in range(1, root + 1):
            out[d::d] += xp[d]
        for m in range(1, n // (root + 1) + 1):
            cols = np.arange(root + 1, n // m + 1, dtype=np.int64)
            out[m * cols] += xp[cols]
        out[1] = xp[1:].sum()
        return out[1:]

    def apply_gram(self, x: ArrayLike) -> np.ndarray:
        """A_n^T A_n x as two sparse passes."""
        return self.apply_transpose(self.apply_forward(x))

    def _padded(self, x: ArrayLike) -> np.ndarray:
        vector = np.asarray(x, dtype=np.float64)
        if vector.ndim != 1:
            raise ValidationError(f"expected a 1-D vector, got shape {vector.shape}")
        require(validate_vector_length(vector.shape[0], self.n))
        padded = np.empty(self.n + 1, dtype=np.float64)
        padded[0] = 0.0
        padded[1:] = vector
        return padded

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise ValidationError(f"index {i} outside 1..{self.n}")


def gram_entry(i: int, j: int, n: int, tables: DivisorTables) -> int:
    """Entry (i, j) of A_n^T A_n.

    n at (1, 1), sigma0(j) on the rest of row 1, sigma0(i) on the rest of
    column 1, sigma0(gcd(i, j)) elsewhere.

    Raises:
        ValidationError: If an index lies outside 1..n
    """
    require(validate_dimension(n))
    for index in (i, j):
        if not 1 <= index <= n:
            raise ValidationError(f"index {index} outside 1..{n}")
    if not tables.covers(n):
        raise ValidationError(f"tables cover 1..{tables.n}, dimension {n} requested")
    if i == 1 and j == 1:
        return n
    if i == 1:
        return int(tables.sigma0[j])
    if j == 1:
        return int(tables.sigma0[i])
    return int(tables.sigma0[math.gcd(i, j)])


def gram_matrix(n: int, tables: DivisorTables) -> np.ndarray:
    """Dense A_n^T A_n assembled from gram_entry (test oracle)."""
    return np.array(
        [[gram_entry(i, j, n, tables) for j in range(1, n + 1)] for i in range(1, n + 1)],
        dtype=np.int64,
    )


def b_matrix(n: int, tables: DivisorTables, force: bool = False) -> np.ndarray:
    """Dense B_n = (sigma0(gcd(i, j))) as int64."""
    _check_dense_b(n, tables, force)
    idx = np.arange(1, n + 1, dtype=np.int64)
    return tables.sigma0[np.gcd.outer(idx, idx)]


def apply_b(
    x: ArrayLike,
    n: int,
    tables: DivisorTables,
    threads: int = 1,
    force: bool = False,
) -> np.ndarray:
    """B_n x with result[i] = sum_k sigma0(gcd(i, k)) x[k].

    Rows are computed independently, one gcd row at a time; with threads > 1
    contiguous row blocks go to a worker pool.

    Args:
        x: Vector of length n
        n: Dimension
        tables: Sieve tables covering n
        threads: Worker threads (0 = one per CPU)
        force: Silence the soft size warning
    """
    _check_dense_b(n, tables, force)
    vector = np.asarray(x, dtype=np.float64)
    require(validate_vector_length(vector.shape[0], n))
    idx = np.arange(1, n + 1, dtype=np.int64)
    sigma0 = tables.sigma0
    out = np.empty(n, dtype=np.float64)

    def fill(rows: range) -> None:
        for i in rows:
            out[i - 1] = np.dot(sigma0[np.gcd(idx, i)], vector)

    workers = WorkerMap(threads)
    workers.map(fill, split_range(1, n + 1, workers.jobs))
    return out


def _check_dense_b(n: int, tables: DivisorTables, force: bool) -> None:
    require(validate_dimension(n))
    if not tables.covers(n):
        raise ValidationError(f"tables cover 1..{tables.n}, dimension {n} requested")
    if n > DENSE_B_GUARD and not force:
        logger.warning(f"Dense B application at n={n} exceeds {DENSE_B_GUARD}; expect O(n^2) work")


def first_row_residual(n: int, tables: DivisorTables) -> float:
    """First entry of (A^T A - B) v_n: n - 1 + sum_{j>=2} (sigma0(j) - 1) sigma1(j)/j."""
    require(validate_dimension(n))
    if not tables.covers(n):
        raise ValidationError(f"tables cover 1..{tables.n}, dimension {n} requested")
    j = np.arange(2, n + 1, dtype=np.int64)
    terms = (tables.sigma0[j] - 1) * (tables.sigma1[j] / j.astype(np.float64))
    return exact_sum(np.concatenate(([float(n - 1)], terms)))


def b_row_exact(i: int, n: int, tables: DivisorTables) -> Fraction:
    """sum_{k<=n} sigma0(gcd(i, k)) sigma1(k)/k as an exact rational."""
    denominator = math.lcm(*range(1, n + 1))
    total = sum(
        int(tables.sigma0[math.gcd(i, k)]) * int(tables.sigma1[k]) * (denominator // k)
        for k in range(1, n + 1)
    )
    return Fraction(total, denominator)


def b_row_divisor_form(i: int, n: int, tables: DivisorTables) -> Fraction:
    """sum_{d|i} sum_{k<=n/d} sigma1(k d)/(k d) as an exact rational."""
    denominator = math.lcm(*range(1, n + 1))
    total = 0
    for d in divisors(i, tables):
        for k in range(1, n // d + 1):
            total += int(tables.sigma1[k * d]) * (denominator // (k * d))
    return Fraction(total, denominator)


def b_row_asymptotic(i: int, n: int, constants: GcdConstants, tables: DivisorTables) -> float:
    """Leading term n * sum_{d|i} c_d / d of row i of B_n v_n."""
    if not constants.covers(i):
        raise ValidationError(f"gcd constants cover 1..{constants.L}, index {i} requested")
    return n * exact_sum([constants.values[d] / d for d in divisors(i, tables)])


def exact_determinant(n: int, force: bool = False) -> int:
    """Exact det(A_n) by Bareiss fraction-free elimination on Python integers.

    Args:
        n: Dimension
        force: Allow n above DETERMINANT_GUARD

    Returns:
        The integer determinant

    Raises:
        SizeGuardError: If n > DETERMINANT_GUARD and force is not set
    """
    require(validate_dimension(n))
    if n > DETERMINANT_GUARD and not force:
        raise SizeGuardError(
            f"exact determinant at n={n} exceeds the guard {DETERMINANT_GUARD}; use force"
        )

    rows = [
        [1 if j == 1 or j % i == 0 else 0 for j in range(1, n + 1)] for i in range(1, n + 1)
    ]
    sign = 1
    previous = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap: Optional[int] = next((r for r in range(k + 1, n) if rows[r][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        pivot_tail = rows[k][k + 1 :]
        for i in range(k + 1, n):
            row = rows[i]
            factor = row[k]
            if factor == 0:
                if pivot != previous:
                    rows[i] = row[: k + 1] + [v * pivot // previous for v in row[k + 1 :]]
                continue
            rows[i] = row[: k + 1] + [
                (v * pivot - factor * w) // previous for v, w in zip(row[k + 1 :], pivot_tail)
            ]
        previous = pivot
    return sign * rows[n - 1][n - 1]
