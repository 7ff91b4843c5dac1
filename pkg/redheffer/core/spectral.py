"""Candidate vector, top singular vector and the cosine statistic.

The candidate v_n has entries sigma1(k)/k. Its distance from a singular
vector of A_n is measured by the cosine between v_n and A_n^T A_n v_n,
which equals 1 exactly for singular vectors.
"""

import math
import time
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from ..data.models import DivisorTables, PowerIterationResult, SimilarityReport, VectorProfile
from ..utils.logger import get_logger
from ..utils.numerics import exact_dot, exact_norm
from ..utils.validators import ValidationError, require, validate_dimension, validate_tolerance
from .number_theory import record_indices, sieve_tables
from .operators import RedhefferOperator, apply_b

logger = get_logger(__name__)


def candidate_vector(n: int, tables: DivisorTables) -> np.ndarray:
    """v_n with entry k - 1 equal to sigma1(k)/k.

    Raises:
        ValidationError: If the tables do not cover n
    """
    require(validate_dimension(n))
    if not tables.covers(n):
        raise ValidationError(f"tables cover 1..{tables.n}, dimension {n} requested")
    k = np.arange(1, n + 1, dtype=np.float64)
    return tables.sigma1[1 : n + 1] / k


def power_iteration(
    op: RedhefferOperator,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> PowerIterationResult:
    """Top eigenpair of A_n^T A_n by power iteration.

    Starts from the normalized all-ones vector and stops once the residual
    ||Gram u - rayleigh u|| is at most tol * rayleigh. A settled Rayleigh
    quotient alone does not end the loop. Reaching max_iter is not an error:
    the result carries converged=False.

    Args:
        op: Operator providing apply_gram
        tol: Relative residual tolerance
        max_iter: Iteration limit

    Returns:
        PowerIterationResult; converged holds exactly when the reported
        residual is within tol * rayleigh
    """
    require(validate_tolerance(tol))
    require(validate_dimension(max_iter, "max_iter"))

    u = np.full(op.n, 1.0 / math.sqrt(op.n))
    iterations = 0

    for iterations in range(1, max_iter + 1):
        w = op.apply_gram(u)
        rayleigh = exact_dot(u, w)
        residual = exact_norm(w - rayleigh * u)
        if residual <= tol * rayleigh:
            break
        u = w / exact_norm(w)

        if iterations % 100 == 0:
            logger.debug(
                f"power iteration n={op.n} step {iterations}: rayleigh={rayleigh!r} "
                f"relative residual {residual / rayleigh:.3e}"
            )

    if u.sum() < 0:
        u = -u
    w = op.apply_gram(u)
    rayleigh = exact_dot(u, w)
    residual = exact_norm(w - rayleigh * u)
    converged = residual <= tol * rayleigh

    if converged:
        logger.info(f"Power iteration converged at n={op.n} after {iterations} steps")
    else:
        logger.warning(
            f"Power iteration did not converge at n={op.n} within {max_iter} steps "
            f"(residual {residual:.3e})"
        )

    return PowerIterationResult(
        n=op.n,
        eigenvector=u,
        rayleigh=rayleigh,
        iterations=iterations,
        residual=residual,
        converged=converged,
    )


def _similarity(op: RedhefferOperator, vec: ArrayLike, started: float) -> SimilarityReport:
    v = np.asarray(vec, dtype=np.float64)
    gram_v = op.apply_gram(v)
    norm_v = exact_norm(v)
    norm_gram_v = exact_norm(gram_v)
    inner = exact_dot(v, gram_v)
    return SimilarityReport(
        n=op.n,
        norm_v=norm_v,
        norm_gram_v=norm_gram_v,
        inner=inner,
        statistic=inner / (norm_v * norm_gram_v),
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )


def cosine_similarity(op: RedhefferOperator, vec: ArrayLike) -> SimilarityReport:
    """Cosine between vec and A^T A vec; 1 exactly for singular vectors."""
    return _similarity(op, vec, time.perf_counter())


def similarity_statistic(n: int, tables: Optional[DivisorTables] = None) -> SimilarityReport:
    """The cosine statistic for the candidate vector v_n.

    Args:
        n: Dimension
        tables: Sieve tables covering n; sieved on the spot when omitted

    Returns:
        SimilarityReport, elapsed time included
    """
    require(validate_dimension(n))
    started = time.perf_counter()
    if tables is None:
        tables = sieve_tables(n)
    op = RedhefferOperator(n, tables)
    report = _similarity(op, candidate_vector(n, tables), started)
    logger.info(f"Similarity statistic at n={n}: {report.statistic!r}")
    return report


def b_similarity_statistic(
    n: int, tables: DivisorTables, threads: int = 1, force: bool = False
) -> float:
    """The cosine statistic with B_n in place of A_n^T A_n (dense, O(n^2))."""
    v = candidate_vector(n, tables)
    bv = apply_b(v, n, tables, threads=threads, force=force)
    return exact_dot(v, bv) / (exact_norm(v) * exact_norm(bv))


def prime_vs_composite_profile(
    vec: ArrayLike, tables: DivisorTables, record_start: int = 1
) -> VectorProfile:
    """Mean entry over primes, over 2p, and over indices with many divisors.

    Args:
        vec: Vector indexed 1..n (0-based array)
        tables: Sieve tables covering n
        record_start: Index seeding the running maximum in record detection

    Returns:
        VectorProfile; means over empty index sets are NaN
    """
    v = np.asarray(vec, dtype=np.float64)
    n = v.shape[0]
    if not tables.covers(n):
        raise ValidationError(f"tables cover 1..{tables.n}, vector of length {n} given")

    index = np.arange(1, n + 1)
    prime = tables.is_prime[1 : n + 1]
    twice_prime = np.zeros(n, dtype=bool)
    doubled = index[prime] * 2
    twice_prime[doubled[doubled <= n] - 1] = True
    composite = tables.sigma0[1 : n + 1] >= 8

    def mean(mask: np.ndarray) -> float:
        return float(np.mean(v[mask])) if mask.any() else math.nan

    return VectorProfile(
        n=n,
        prime_mean=mean(prime),
        twice_prime_mean=mean(twice_prime),
        composite_mean=mean(composite),
        minimum=float(v.min()),
        maximum=float(v.max()),
        records=record_indices(v, start=min(record_start, n)),
    )
