"""Series behind the limit of the cosine statistic.

Single sum sum c_d^2/d^2, the weighted and unweighted double gcd sums,
two-cutoff tail extrapolation, and the closed-form limit alpha.
"""

import math
from typing import Callable, Iterable

import numpy as np

from ..data.models import AlphaReport, DivisorTables, ExtrapolationEstimate, GcdConstants
from ..utils.logger import get_logger
from ..utils.numerics import ZETA3, exact_sum
from ..utils.validators import ValidationError, require, validate_cutoff_pair, validate_dimension
from ..utils.workers import WorkerMap, split_range
from .spectral import candidate_vector

logger = get_logger(__name__)

# O(D^2) gcd evaluations beyond this cutoff
DOUBLE_SUM_WARNING = 20_000

# sqrt(2) / (sqrt(5) sqrt(zeta(3)))
ALPHA_PREFACTOR = math.sqrt(2.0) / (math.sqrt(5.0) * math.sqrt(ZETA3))

# 5 zeta(3) / 2, limit of ||v_n||^2 / n and of the unweighted double sum
NORM_CONSTANT = 5.0 * ZETA3 / 2.0

TAIL_MODELS = ("power", "log")


def _require_table(constants: GcdConstants, D: int) -> None:
    require(validate_dimension(D, "D"))
    if not constants.covers(D):
        raise ValidationError(f"gcd constants cover 1..{constants.L}, cutoff {D} requested")


def sum_cd_squared(D: int, constants: GcdConstants) -> float:
    """sum_{d<=D} c_d^2 / d^2, exactly rounded."""
    _require_table(constants, D)
    d = np.arange(1, D + 1, dtype=np.float64)
    c = constants.values[1 : D + 1]
    return exact_sum(c * c / (d * d))


def _double_gcd_sum(weights: np.ndarray, symmetric: bool, threads: int) -> float:
    """sum_{a,b<=D} w_a w_b gcd(a, b) for 0-based weights of length D.

    symmetric=True adds the diagonal and twice the strict upper triangle.
    Each row is reduced with exact_sum; rows combine in index order.
    """
    D = weights.shape[0]
    if D > DOUBLE_SUM_WARNING:
        logger.warning(f"Double gcd sum at D={D} exceeds {DOUBLE_SUM_WARNING}; O(D^2) work")
    index = np.arange(1, D + 1, dtype=np.int64)

    def rows(block: range) -> list[float]:
        totals = []
        for a in block:
            if symmetric:
                upper = np.gcd(index[a:], a) * weights[a:]
                row = weights[a - 1] * (weights[a - 1] * a + 2.0 * exact_sum(upper))
            else:
                row = weights[a - 1] * exact_sum(np.gcd(index, a) * weights)
            totals.append(row)
        return totals

    workers = WorkerMap(threads)
    blocks = workers.map(rows, split_range(1, D + 1, workers.jobs))
    return exact_sum([value for block in blocks for value in block])


def double_gcd_sum_weighted(
    D: int, constants: GcdConstants, threads: int = 1, symmetric: bool = True
) -> float:
    """sum_{d1,d2<=D} c_d1 c_d2 gcd(d1, d2) / (d1^2 d2^2).

    Args:
        D: Cutoff
        constants: Table covering D
        threads: Worker threads (0 = one per CPU); the result does not depend on it
        symmetric: Use the triangle (default) or the full square
    """
    _require_table(constants, D)
    return _double_gcd_sum(constants.weights(D), symmetric, threads)


def double_gcd_sum_unweighted(D: int, threads: int = 1, symmetric: bool = True) -> float:
    """sum_{d1,d2<=D} gcd(d1, d2) / (d1^2 d2^2); tends to 5 zeta(3) / 2."""
    require(validate_dimension(D, "D"))
    d = np.arange(1, D + 1, dtype=np.float64)
    return _double_gcd_sum(1.0 / (d * d), symmetric, threads)


def double_gcd_sum_divisor_form(D: int, weights: np.ndarray, tables: DivisorTables) -> float:
    """The truncated double sum rewritten through gcd(a, b) = sum_{e|a, e|b} phi(e).

    Equals sum_e phi(e) (sum_{e|d<=D} w_d)^2 and costs O(D log D).

    Args:
        D: Cutoff
        weights: 0-based weights of length D
        tables: Sieve tables covering D
    """
    require(validate_dimension(D, "D"))
    if weights.shape != (D,):
        raise ValidationError(f"weights have shape {weights.shape}, expected ({D},)")
    if not tables.covers(D):
        raise ValidationError(f"tables cover 1..{tables.n}, cutoff {D} requested")
    padded = np.concatenate(([0.0], weights))
    terms = [float(tables.phi[e]) * exact_sum(padded[e::e]) ** 2 for e in range(1, D + 1)]
    return exact_sum(terms)


def extrapolate(
    sum_fn: Callable[[int], float],
    N1: int,
    N2: int,
    tail_exponent: float = 1.0,
    tail_model: str = "power",
) -> ExtrapolationEstimate:
    """Fit S(N) + c t(N) at two cutoffs and return the implied limit.

    t(N) = 1/N^p for the "power" model and log(N)/N^p for "log".

    Args:
        sum_fn: Partial sums as a function of the cutoff
        N1: Lower cutoff
        N2: Upper cutoff
        tail_exponent: p
        tail_model: "power" or "log"

    Returns:
        ExtrapolationEstimate

    Raises:
        ValidationError: If N1 >= N2 or the model is unknown
    """
    require(validate_cutoff_pair(N1, N2))
    if tail_model not in TAIL_MODELS:
        raise ValidationError(f"unknown tail model {tail_model!r}")

    def tail(N: int) -> float:
        scale = math.log(N) if tail_model == "log" else 1.0
        return scale / float(N) ** tail_exponent

    sum_lo = sum_fn(N1)
    sum_hi = sum_fn(N2)
    if tail_model == "power" and tail_exponent == 1.0:
        coefficient = (sum_hi - sum_lo) * N1 * N2 / (N2 - N1)
    else:
        coefficient = (sum_hi - sum_lo) / (tail(N1) - tail(N2))
    limit = sum_hi + coefficient * tail(N2)
    logger.debug(f"Extrapolated ({N1}, {N2}): c={coefficient!r}, limit={limit!r}")
    return ExtrapolationEstimate(
        cutoff_lo=N1,
        cutoff_hi=N2,
        sum_lo=sum_lo,
        sum_hi=sum_hi,
        tail_coefficient=coefficient,
        limit=limit,
        tail_exponent=tail_exponent,
        tail_model=tail_model,
    )


def compute_alpha(
    s1_estimate: ExtrapolationEstimate, s2_estimate: ExtrapolationEstimate
) -> AlphaReport:
    """alpha = sqrt(2) / (sqrt(5) sqrt(zeta(3))) * s1 / sqrt(s2).

    Raises:
        ValidationError: If either limit is not finite and positive
    """
    s1 = s1_estimate.limit
    s2 = s2_estimate.limit
    for name, value in (("s1", s1), ("s2", s2)):
        if not math.isfinite(value) or value <= 0:
            raise ValidationError(f"{name} must be finite and positive, got {value}")
    alpha = ALPHA_PREFACTOR * s1 / math.sqrt(s2)
    logger.info(f"alpha = {alpha!r} from s1={s1!r}, s2={s2!r}")
    return AlphaReport(
        s1=s1,
        s2=s2,
        prefactor=ALPHA_PREFACTOR,
        alpha=alpha,
        s1_estimate=s1_estimate,
        s2_estimate=s2_estimate,
    )


def vector_norm_table(ns: Iterable[int], tables: DivisorTables) -> list[tuple[int, float]]:
    """||v_n||^2 / n for each n, accumulated directly from (sigma1(k)/k)^2."""
    table = []
    for n in ns:
        v = candidate_vector(n, tables)
        table.append((n, exact_sum(v * v) / n))
    return table
