"""Data models for redheffer-spectral.

This module defines the domain models using dataclasses. Tables and reports
are immutable once built; RunConfig validates itself on construction.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import numpy as np

from ..utils.validators import (
    ValidationError,
    require,
    validate_cutoff_pair,
    validate_dimension,
    validate_tolerance,
)


@dataclass(frozen=True)
class DivisorTables:
    """Sieved arithmetic functions for indices 1..n.

    Every array has length n + 1; slot 0 is unused and holds 0.

    Attributes:
        n: Index bound
        mu: Moebius function (int8)
        sigma0: Number of divisors (int64)
        sigma1: Sum of divisors (int64)
        phi: Euler totient (int64)
        spf: Smallest prime factor, spf[1] = 1 (int64)
    """

    n: int
    mu: np.ndarray
    sigma0: np.ndarray
    sigma1: np.ndarray
    phi: np.ndarray
    spf: np.ndarray

    def __post_init__(self) -> None:
        """Validate array shapes after initialization."""
        require(validate_dimension(self.n))
        for name in ("mu", "sigma0", "sigma1", "phi", "spf"):
            array = getattr(self, name)
            if array.shape != (self.n + 1,):
                raise ValidationError(
                    f"{name} has shape {array.shape}, expected ({self.n + 1},)"
                )
            array.setflags(write=False)

    def covers(self, n: int) -> bool:
        """Check whether the tables reach index n.

        Args:
            n: Index bound requested by a caller

        Returns:
            True if 1 <= n <= self.n
        """
        return 1 <= n <= self.n

    @property
    def abundancy(self) -> np.ndarray:
        """sigma1(k)/k as float64, slot 0 set to 0."""
        ratio = np.zeros(self.n + 1, dtype=np.float64)
        ratio[1:] = self.sigma1[1:] / np.arange(1, self.n + 1, dtype=np.float64)
        return ratio

    @property
    def is_prime(self) -> np.ndarray:
        """Boolean mask of primes (spf[k] == k for k >= 2)."""
        mask = self.spf == np.arange(self.n + 1)
        mask[:2] = False
        return mask


class GcdMethod(str, Enum):
    """How a GcdConstants table was evaluated."""

    CLOSED_FORM = "closed_form"
    TRUNCATED_SERIES = "truncated_series"


@dataclass(frozen=True)
class GcdConstants:
    """Table of c_l = sum_d gcd(d, l)/d^2 for l = 1..L.

    Attributes:
        L: Table bound
        values: float64 array of length L + 1, slot 0 unused
        method: Evaluation method
        cutoff: Series cutoff D for TRUNCATED_SERIES, None otherwise
    """

    L: int
    values: np.ndarray
    method: GcdMethod = GcdMethod.CLOSED_FORM
    cutoff: Optional[int] = None

    def __post_init__(self) -> None:
        """Validate table after initialization."""
        require(validate_dimension(self.L, "L"))
        if self.values.shape != (self.L + 1,):
            raise ValidationError(f"values has shape {self.values.shape}, expected ({self.L + 1},)")
        if self.method is GcdMethod.TRUNCATED_SERIES and self.cutoff is None:
            raise ValidationError("truncated series table needs its cutoff")
        self.values.setflags(write=False)

    def covers(self, D: int) -> bool:
        """Check whether the table reaches index D."""
        return 1 <= D <= self.L

    def weights(self, D: int) -> np.ndarray:
        """c_d / d^2 for d = 1..D (0-based array of length D)."""
        d = np.arange(1, D + 1, dtype=np.float64)
        return self.values[1 : D + 1] / (d * d)


@dataclass(frozen=True)
class PowerIterationResult:
    """Outcome of power iteration on the Gram operator.

    Attributes:
        n: Dimension
        eigenvector: Unit vector, sign-normalized to nonnegative sum
        rayleigh: Top eigenvalue estimate of A^T A
        iterations: Number of operator applications in the loop
        residual: ||Gram u - rayleigh u||
        converged: False when max_iter was reached first
    """

    n: int
    eigenvector: np.ndarray
    rayleigh: float
    iterations: int
    residual: float
    converged: bool

    @property
    def singular_value(self) -> float:
        """Largest singular value of A_n."""
        return float(np.sqrt(self.rayleigh))


@dataclass(frozen=True)
class SimilarityReport:
    """Cosine similarity between v and A^T A v.

    Attributes:
        n: Dimension
        norm_v: ||v||
        norm_gram_v: ||A^T A v||
        inner: <v, A^T A v>
        statistic: inner / (norm_v * norm_gram_v)
        elapsed_ms: Wall time of the computation
    """

    n: int
    norm_v: float
    norm_gram_v: float
    inner: float
    statistic: float
    elapsed_ms: float

    @property
    def norm_v_squared_over_n(self) -> float:
        """||v||^2 / n, tends to 5 zeta(3) / 2."""
        return self.norm_v**2 / self.n

    @property
    def inner_over_n2(self) -> float:
        """<v, A^T A v> / n^2, tends to sum c_d^2 / d^2."""
        return self.inner / float(self.n) ** 2

    @property
    def norm_gram_v_over_n32(self) -> float:
        """||A^T A v|| / n^(3/2), tends to the square root of the weighted double sum."""
        return self.norm_gram_v / float(self.n) ** 1.5

    def to_dict(self) -> dict[str, Any]:
        """Serialize for JSON reports."""
        return {
            "n": self.n,
            "norm_v": self.norm_v,
            "norm_gram_v": self.norm_gram_v,
            "inner": self.inner,
            "statistic": self.statistic,
            "norm_v_squared_over_n": self.norm_v_squared_over_n,
            "inner_over_n2": self.inner_over_n2,
            "norm_gram_v_over_n32": self.norm_gram_v_over_n32,
            "elapsed_ms": self.elapsed_ms,
        }


@dataclass(frozen=True)
class ExtrapolationEstimate:
    """Two partial sums and the limit implied by a c * tail(N) error model.

    Attributes:
        cutoff_lo: N1
        cutoff_hi: N2
        sum_lo: S(N1)
        sum_hi: S(N2)
        tail_coefficient: c solving S(N1) + c t(N1) = S(N2) + c t(N2)
        limit: S(N2) + c t(N2)
        tail_exponent: p in t(N) = 1/N^p (or log(N)/N^p)
        tail_model: "power" or "log"
    """

    cutoff_lo: int
    cutoff_hi: int
    sum_lo: float
    sum_hi: float
    tail_coefficient: float
    limit: float
    tail_exponent: float = 1.0
    tail_model: str = "power"

    def to_dict(self) -> dict[str, Any]:
        """Serialize for JSON reports."""
        return {
            "cutoff_lo": self.cutoff_lo,
            "cutoff_hi": self.cutoff_hi,
            "sum_lo": self.sum_lo,
            "sum_hi": self.sum_hi,
            "tail_coefficient": self.tail_coefficient,
            "limit": self.limit,
            "tail_exponent": self.tail_exponent,
            "tail_model": self.tail_model,
        }


@dataclass(frozen=True)
class AlphaReport:
    """Closed-form limit of the cosine statistic.

    Attributes:
        s1: Extrapolated sum of c_d^2 / d^2
        s2: Extrapolated weighted double gcd sum
        prefactor: sqrt(2) / (sqrt(5) sqrt(zeta(3)))
        alpha: prefactor * s1 / sqrt(s2)
        s1_estimate: Extrapolation behind s1
        s2_estimate: Extrapolation behind s2
    """

    s1: float
    s2: float
    prefactor: float
    alpha: float
    s1_estimate: Optional[ExtrapolationEstimate] = None
    s2_estimate: Optional[ExtrapolationEstimate] = None

    def to_dict(self) -> dict[str, Any]:
        """Serialize for JSON reports."""
        return {
            "s1": self.s1,
            "s2": self.s2,
            "prefactor": self.prefactor,
            "alpha": self.alpha,
            "s1_estimate": self.s1_estimate.to_dict() if self.s1_estimate else None,
            "s2_estimate": self.s2_estimate.to_dict() if self.s2_estimate else None,
        }


@dataclass(frozen=True)
class VectorProfile:
    """Descriptive statistics of a vector over prime and composite indices.

    Attributes:
        n: Dimension
        prime_mean: Mean entry over prime indices
        twice_prime_mean: Mean entry over indices 2p, p prime
        composite_mean: Mean entry over indices with sigma0 >= 8
        minimum: Smallest entry
        maximum: Largest entry
        records: Record indices (1-based)
    """

    n: int
    prime_mean: float
    twice_prime_mean: float
    composite_mean: float
    minimum: float
    maximum: float
    records: list[int] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        """Serialize for JSON reports."""
        return {
            "n": self.n,
            "prime_mean": self.prime_mean,
            "twice_prime_mean": self.twice_prime_mean,
            "composite_mean": self.composite_mean,
            "min": self.minimum,
            "max": self.maximum,
            "records": list(self.records),
        }


class Command(str, Enum):
    """Experiments available from the command line."""

    VERIFY_DET = "verify-det"
    SINGULAR_VECTOR = "singular-vector"
    SIMILARITY = "similarity"
    ALPHA = "alpha"
    RECORDS = "records"
    CONSTANTS = "constants"
    PROFILE = "profile"


class OutputFormat(str, Enum):
    """Output file format."""

    CSV = "csv"
    JSON = "json"


DEFAULT_FORMATS: dict[Command, OutputFormat] = {
    Command.VERIFY_DET: OutputFormat.CSV,
    Command.SINGULAR_VECTOR: OutputFormat.CSV,
    Command.RECORDS: OutputFormat.CSV,
    Command.SIMILARITY: OutputFormat.JSON,
    Command.ALPHA: OutputFormat.JSON,
    Command.CONSTANTS: OutputFormat.JSON,
    Command.PROFILE: OutputFormat.JSON,
}


@dataclass
class RunConfig:
    """Configuration of a single command-line run.

    Attributes:
        command: Experiment to run
        n: Dimension (verify-det, singular-vector, similarity, records, profile,
            and the top of the constants table)
        cutoff: Upper cutoff of the single sum (alpha) or of the unweighted
            double sum (constants)
        cutoff_lo: Lower cutoff of the single sum
        double_cutoff: Upper cutoff of the weighted double sum
        double_cutoff_lo: Lower cutoff of the weighted double sum
        tol: Power iteration tolerance
        max_iter: Power iteration limit
        output_path: Output file, None writes to stdout
        format: Output format, None picks the command default
        threads: Worker threads, 0 = one per CPU
        cache_dir: Sieve cache directory, None uses the XDG default
        use_cache: Whether to read and write the sieve cache
        force: Override size guards
    """

    command: Command
    n: int = 1000
    cutoff: int = 1_000_000
    cutoff_lo: int = 100_000
    double_cutoff: int = 10_000
    double_cutoff_lo: int = 5_000
    tol: float = 1e-10
    max_iter: int = 10_000
    output_path: Optional[Path] = None
    format: Optional[OutputFormat] = None
    threads: int = 0
    cache_dir: Optional[Path] = None
    use_cache: bool = True
    force: bool = False

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        self.command = Command(self.command)
        if self.format is None:
            self.format = DEFAULT_FORMATS[self.command]
        self.format = OutputFormat(self.format)

        require(validate_dimension(self.n, "n"))
        require(validate_dimension(self.max_iter, "max_iter"))
        require(validate_tolerance(self.tol))
        if self.threads < 0:
            raise ValidationError(f"threads must be >= 0, got {self.threads}")

        if self.command is Command.ALPHA:
            require(validate_cutoff_pair(self.cutoff_lo, self.cutoff))
            require(validate_cutoff_pair(self.double_cutoff_lo, self.double_cutoff))
        if self.command is Command.CONSTANTS:
            require(validate_dimension(self.cutoff, "cutoff"))
            if self.cutoff < 2:
                raise ValidationError("constants needs cutoff >= 2 to extrapolate")

    def to_dict(self) -> dict[str, Any]:
        """Config echo for JSON reports."""
        return {
            "command": self.command.value,
            "n": self.n,
            "cutoff": self.cutoff,
            "cutoff_lo": self.cutoff_lo,
            "double_cutoff": self.double_cutoff,
            "double_cutoff_lo": self.double_cutoff_lo,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "format": self.format.value if self.format else None,
            "threads": self.threads,
            "force": self.force,
        }


@dataclass(frozen=True)
class RecordRow:
    """One index that is a divisor-count record, an abundancy record, or both.

    Attributes:
        index: The index k
        highly_composite: sigma0(k) exceeds sigma0(j) for all j < k
        superabundant: sigma1(k)/k exceeds sigma1(j)/j for all j < k
    """

    index: int
    highly_composite: bool
    superabundant: bool

    @property
    def classification(self) -> str:
        """Label used in the records report."""
        if self.highly_composite and self.superabundant:
            return "both"
        if self.highly_composite:
            return "highly_composite"
        return "superabundant"
