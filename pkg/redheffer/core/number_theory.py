"""Sieves for the arithmetic functions behind the Redheffer matrix.

This module fills the mu, sigma0, sigma1, phi and smallest-prime-factor
tables, evaluates the gcd-series constants c_l, Pillai's function and the
Mertens function, and detects record indices.
"""

from math import isqrt
from typing import Sequence

import numpy as np

from ..data.models import DivisorTables, GcdConstants, GcdMethod, RecordRow
from ..utils.logger import get_logger
from ..utils.numerics import ZETA2, exact_sum
from ..utils.validators import ValidationError, require, validate_dimension

logger = get_logger(__name__)


def _require_cover(tables: DivisorTables, n: int) -> None:
    """Raise ValidationError unless tables reach index n."""
    if not tables.covers(n):
        raise ValidationError(f"tables cover 1..{tables.n}, index {n} requested")


def _smallest_prime_factors(n: int) -> np.ndarray:
    """Eratosthenes sieve recording the first prime that strikes each index."""
    spf = np.zeros(n + 1, dtype=np.int64)
    spf[1] = 1
    for p in range(2, isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    untouched = np.flatnonzero(spf == 0)
    spf[untouched] = untouched
    spf[0] = 0
    return spf


def sieve_tables(n: int) -> DivisorTables:
    """Sieve mu, sigma0, sigma1, phi and spf for indices 1..n.

    sigma0 and sigma1 come from one divisor-enumeration pass in O(n log n):
    divisors d <= sqrt(n) update their multiples through strided slices,
    larger divisors are handled by cofactor j < sqrt(n) in vectorized blocks.
    mu and phi are filled prime by prime from the spf table.

    Args:
        n: Index bound

    Returns:
        Populated DivisorTables

    Raises:
        ValidationError: If n < 1
    """
    require(validate_dimension(n))
    n = int(n)
    logger.debug(f"Sieving divisor tables up to {n}")

    spf = _smallest_prime_factors(n)

    sigma0 = np.zeros(n + 1, dtype=np.int64)
    sigma1 = np.zeros(n + 1, dtype=np.int64)
    root = isqrt(n)
    for d in range(1, root + 1):
        sigma0[d::d] += 1
        sigma1[d::d] += d
    for j in range(1, n // (root + 1) + 1):
        large = np.arange(root + 1, n // j + 1, dtype=np.int64)
        sigma0[j * large] += 1
        sigma1[j * large] += large

    index = np.arange(n + 1, dtype=np.int64)
    primes = np.flatnonzero(spf == index)
    primes = primes[primes >= 2]

    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    phi = index.copy()
    for p in primes.tolist():
        mu[p::p] *= -1
        if p * p <= n:
            mu[p * p :: p * p] = 0
        phi[p::p] -= phi[p::p] // p

    logger.debug(f"Sieve complete: {len(primes)} primes up to {n}")
    return DivisorTables(n=n, mu=mu, sigma0=sigma0, sigma1=sigma1, phi=phi, spf=spf)


def factorize(k: int, tables: DivisorTables) -> list[tuple[int, int]]:
    """Prime factorization of k from the spf table.

    Args:
        k: Index, 1 <= k <= tables.n
        tables: Sieve tables

    Returns:
        List of (prime, exponent), primes ascending
    """
    _require_cover(tables, k)
    factors: list[tuple[int, int]] = []
    while k > 1:
        p = int(tables.spf[k])
        exponent = 0
        while k % p == 0:
            k //= p
            exponent += 1
        factors.append((p, exponent))
    return factors


def divisors(k: int, tables: DivisorTables) -> list[int]:
    """Sorted divisors of k, built from its factorization."""
    result = [1]
    for p, exponent in factorize(k, tables):
        powers = [p**e for e in range(1, exponent + 1)]
        result = result + [d * q for d in result for q in powers]
    return sorted(result)


def mertens(n: int, tables: DivisorTables) -> int:
    """Mertens function M(n) = sum of mu(k) for k <= n.

    Args:
        n: Bound
        tables: Sieve tables covering n

    Returns:
        M(n)

    Raises:
        ValidationError: If n exceeds the table bound
    """
    _require_cover(tables, n)
    return int(np.sum(tables.mu[1 : n + 1], dtype=np.int64))


def pillai(d: int, tables: DivisorTables) -> int:
    """Pillai's function P(d) = sum_{k<=d} gcd(k, d).

    Evaluated through the divisor-totient form sum_{e|d} e * phi(d/e).
    """
    _require_cover(tables, d)
    return sum(e * int(tables.phi[d // e]) for e in divisors(d, tables))


def gcd_square_sum(ell: int) -> int:
    """Exact sum of gcd(ell, d)^2 over one period d = 1..ell."""
    require(validate_dimension(ell, "l"))
    g = np.gcd(np.arange(1, ell + 1, dtype=np.int64), ell)
    return int(np.sum(g * g, dtype=np.int64))


def gcd_square_sum_divisor_form(ell: int, tables: DivisorTables) -> int:
    """Exact sum_{e|ell} e^2 * phi(ell/e); equals gcd_square_sum(ell)."""
    _require_cover(tables, ell)
    return sum(e * e * int(tables.phi[ell // e]) for e in divisors(ell, tables))


def c_constant(ell: int, tables: DivisorTables) -> float:
    """The gcd-series constant c_l = sum_d gcd(d, l)/d^2 in closed form.

    c_l = zeta(2)/l^2 * sum_{d=1}^{l} gcd(l, d)^2. The period sum is taken
    from the divisor-totient form when the tables reach l, directly otherwise.

    Args:
        ell: Index l >= 1
        tables: Sieve tables

    Returns:
        c_l
    """
    require(validate_dimension(ell, "l"))
    if tables.covers(ell):
        period = gcd_square_sum_divisor_form(ell, tables)
    else:
        period = gcd_square_sum(ell)
    return ZETA2 * (float(period) / float(ell * ell))


def c_constant_series(ell: int, D: int) -> float:
    """Truncated series sum_{d<=D} gcd(d, l)/d^2.

    The omitted tail is at most l/D since gcd(d, l) <= l.

    Raises:
        ValidationError: If D < l
    """
    require(validate_dimension(ell, "l"))
    require(validate_dimension(D, "D"))
    if D < ell:
        raise ValidationError(f"cutoff D={D} must be >= l={ell}")
    d = np.arange(1, D + 1, dtype=np.int64)
    terms = np.gcd(d, ell).astype(np.float64) / (d.astype(np.float64) ** 2)
    return exact_sum(terms)


def gcd_constants(L: int, tables: DivisorTables) -> GcdConstants:
    """Closed-form table of c_l for l = 1..L in O(L log L).

    The period sums g(l) = sum_{e|l} e^2 phi(l/e) are accumulated as a
    Dirichlet convolution, split at sqrt(L) like the sigma sieve.

    Args:
        L: Table bound
        tables: Sieve tables covering L

    Returns:
        GcdConstants with method CLOSED_FORM
    """
    require(validate_dimension(L, "L"))
    _require_cover(tables, L)
    L = int(L)
    phi = tables.phi

    period = np.zeros(L + 1, dtype=np.int64)
    root = isqrt(L)
    for e in range(1, root + 1):
        period[e::e] += e * e * phi[1 : L // e + 1]
    for m in range(1, L // (root + 1) + 1):
        large = np.arange(root + 1, L // m + 1, dtype=np.int64)
        period[m * large] += large * large * phi[m]

    ell = np.arange(L + 1, dtype=np.int64)
    values = np.zeros(L + 1, dtype=np.float64)
    values[1:] = ZETA2 * (period[1:].astype(np.float64) / (ell[1:] * ell[1:]).astype(np.float64))
    logger.debug(f"Closed-form gcd constants computed up to {L}")
    return GcdConstants(L=L, values=values, method=GcdMethod.CLOSED_FORM)


def gcd_constants_series(L: int, D: int) -> GcdConstants:
    """Table of truncated series values, one c_constant_series per l <= L."""
    require(validate_dimension(L, "L"))
    if D < L:
        raise ValidationError(f"cutoff D={D} must be >= L={L}")
    values = np.zeros(L + 1, dtype=np.float64)
    for ell in range(1, L + 1):
        values[ell] = c_constant_series(ell, D)
    return GcdConstants(L=L, values=values, method=GcdMethod.TRUNCATED_SERIES, cutoff=D)


def scaled_divisor_sum(ell: int, n: int, tables: DivisorTables) -> float:
    """Partial sum sum_{k<=n} sigma1(l k)/(l k).

    Grows like n * c_l with an O(log(l n)) error.

    Args:
        ell: Scale l
        n: Number of terms
        tables: Sieve tables covering l * n
    """
    require(validate_dimension(ell, "l"))
    require(validate_dimension(n, "n"))
    _require_cover(tables, ell * n)
    k = ell * np.arange(1, n + 1, dtype=np.int64)
    return exact_sum(tables.sigma1[k] / k.astype(np.float64))


def record_indices(values: Sequence[float] | np.ndarray, start: int = 1) -> list[int]:
    """Indices where the sequence reaches a strict new maximum.

    values[0] belongs to index 1. Index 1 is always reported. The running
    maximum is seeded at index start, which is itself reported; entries
    strictly between 1 and start are skipped.

    Args:
        values: Nonempty sequence
        start: First index taking part in the running maximum

    Returns:
        Ascending 1-based record indices
    """
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 1 or array.size == 0:
        raise ValidationError("record detection needs a nonempty 1-D sequence")
    if not 1 <= start <= array.size:
        raise ValidationError(f"start must lie in 1..{array.size}, got {start}")

    tail = array[start - 1 :]
    running = np.maximum.accumulate(tail)
    hits = np.flatnonzero(tail[1:] > running[:-1]) + 1
    records = [start + int(i) for i in hits]
    if start != 1:
        records.insert(0, start)
    return [1] + records


def classify_records(tables: DivisorTables, n: int) -> list[RecordRow]:
    """Divisor-count records next to abundancy records over 1..n.

    Args:
        tables: Sieve tables covering n
        n: Bound

    Returns:
        One RecordRow per index that is a record of either sequence
    """
    _require_cover(tables, n)
    highly_composite = set(record_indices(tables.sigma0[1 : n + 1]))
    superabundant = set(record_indices(tables.abundancy[1 : n + 1]))
    return [
        RecordRow(index=k, highly_composite=k in highly_composite, superabundant=k in superabundant)
        for k in sorted(highly_composite | superabundant)
    ]

