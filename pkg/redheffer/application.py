"""Experiment runner.

This module coordinates the sieve cache and the library modules for one
command-line run and writes the resulting CSV or JSON artifact.
"""

import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import __version__
from .core.constants import (
    NORM_CONSTANT,
    compute_alpha,
    double_gcd_sum_unweighted,
    double_gcd_sum_weighted,
    extrapolate,
    sum_cd_squared,
    vector_norm_table,
)
from .core.number_theory import (
    classify_records,
    gcd_constants,
    mertens,
    record_indices,
    sieve_tables,
)
from .core.operators import DETERMINANT_GUARD, RedhefferOperator, SizeGuardError, exact_determinant
from .core.spectral import (
    candidate_vector,
    power_iteration,
    prime_vs_composite_profile,
    similarity_statistic,
)
from .data.cache import TableCache
from .data.models import Command, DivisorTables, OutputFormat, RunConfig
from .utils.logger import get_logger
from .utils.validators import ValidationError

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_GUARD = 2
EXIT_NOT_CONVERGED = 3

ARTIFACT_NAME = "redheffer-spectral"

# Report commands emit a single JSON object
_JSON_ONLY = {Command.SIMILARITY, Command.ALPHA, Command.CONSTANTS, Command.PROFILE}

# Singular-vector records skip the dominant first coordinate
SINGULAR_RECORD_START = 2


def format_float(value: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(value, ".17g")


class ExperimentRunner:
    """Runs one configured experiment and writes its artifact.

    Sieve tables are served from the binary cache when enabled.
    """

    def __init__(self, config: RunConfig) -> None:
        """Initialize runner.

        Args:
            config: Validated run configuration

        Raises:
            ValidationError: If a report command is asked for CSV output
        """
        if config.command in _JSON_ONLY and config.format is not OutputFormat.JSON:
            raise ValidationError(f"{config.command.value} only writes JSON")
        self.config = config
        self.cache: Optional[TableCache] = (
            TableCache(config.cache_dir) if config.use_cache else None
        )
        self._started = time.perf_counter()
        logger.debug(f"ExperimentRunner initialized for {config.command.value}")

    def run(self) -> int:
        """Dispatch the configured command.

        Returns:
            Exit code (0 success, 3 non-converged iteration)

        Raises:
            ValidationError: On invalid arguments
            SizeGuardError: On a size guard violation without force
        """
        handlers: dict[Command, Callable[[], int]] = {
            Command.VERIFY_DET: self._verify_det,
            Command.SINGULAR_VECTOR: self._singular_vector,
            Command.SIMILARITY: self._similarity,
            Command.ALPHA: self._alpha,
            Command.RECORDS: self._records,
            Command.CONSTANTS: self._constants,
            Command.PROFILE: self._profile,
        }
        logger.info(f"Running {self.config.command.value}")
        return handlers[self.config.command]()

    def tables(self, n: int) -> DivisorTables:
        """Sieve tables covering n, through the cache when enabled."""
        if self.cache is None:
            return sieve_tables(n)
        return self.cache.get_or_build(n, sieve_tables)

    # Commands

    def _verify_det(self) -> int:
        n = self.config.n
        if n > DETERMINANT_GUARD and not self.config.force:
            raise SizeGuardError(
                f"verify-det up to n={n} exceeds the guard {DETERMINANT_GUARD}; pass --force"
            )
        tables = self.tables(n)
        rows = []
        for k in range(1, n + 1):
            determinant = exact_determinant(k, force=self.config.force)
            expected = mertens(k, tables)
            if determinant != expected:
                logger.error(f"det(A_{k}) = {determinant} but M({k}) = {expected}")
            rows.append([k, determinant, expected, determinant == expected])
        self._write_table(["n", "determinant", "mertens", "match"], rows)
        return EXIT_OK

    def _singular_vector(self) -> int:
        n = self.config.n
        tables = self.tables(n)
        result = power_iteration(
            RedhefferOperator(n, tables), self.config.tol, self.config.max_iter
        )
        u = result.eigenvector
        records = set(record_indices(u, start=min(SINGULAR_RECORD_START, n)))
        abundancy = tables.abundancy
        rows = [
            [k, u[k - 1], int(tables.sigma0[k]), abundancy[k], k in records]
            for k in range(1, n + 1)
        ]
        self._write_table(["index", "entry", "sigma0", "sigma1_over_k", "is_record"], rows)
        return EXIT_OK if result.converged else EXIT_NOT_CONVERGED

    def _similarity(self) -> int:
        n = self.config.n
        report = similarity_statistic(n, self.tables(n))
        self._write_json(report.to_dict())
        return EXIT_OK

    def _alpha(self) -> int:
        config = self.config
        bound = max(config.cutoff, config.double_cutoff)
        constants = gcd_constants(bound, self.tables(bound))
        s1 = extrapolate(lambda D: sum_cd_squared(D, constants), config.cutoff_lo, config.cutoff)
        s2 = extrapolate(
            lambda D: double_gcd_sum_weighted(D, constants, threads=config.threads),
            config.double_cutoff_lo,
            config.double_cutoff,
        )
        self._write_json(compute_alpha(s1, s2).to_dict())
        return EXIT_OK

    def _records(self) -> int:
        n = self.config.n
        tables = self.tables(n)
        abundancy = tables.abundancy
        rows = [
            [
                row.index,
                int(tables.sigma0[row.index]),
                abundancy[row.index],
                row.highly_composite,
                row.superabundant,
                row.classification,
            ]
            for row in classify_records(tables, n)
        ]
        header = [
            "index",
            "sigma0",
            "sigma1_over_k",
            "sigma0_record",
            "abundancy_record",
            "classification",
        ]
        self._write_table(header, rows)
        return EXIT_OK

    def _constants(self) -> int:
        config = self.config
        estimate = extrapolate(
            lambda D: double_gcd_sum_unweighted(D, threads=config.threads),
            config.cutoff // 2,
            config.cutoff,
        )
        tables = self.tables(config.n)
        norms = [
            {
                "n": n,
                "norm_squared_over_n": value,
                "difference": value - NORM_CONSTANT,
            }
            for n, value in vector_norm_table(decades(config.n), tables)
        ]
        self._write_json(
            {
                "target": NORM_CONSTANT,
                "unweighted_double_sum": estimate.to_dict(),
                "unweighted_difference": estimate.limit - NORM_CONSTANT,
                "norm_table": norms,
            }
        )
        return EXIT_OK

    def _profile(self) -> int:
        n = self.config.n
        tables = self.tables(n)
        result = power_iteration(
            RedhefferOperator(n, tables), self.config.tol, self.config.max_iter
        )
        candidate = prime_vs_composite_profile(candidate_vector(n, tables), tables)
        singular = prime_vs_composite_profile(
            result.eigenvector, tables, record_start=SINGULAR_RECORD_START
        )
        self._write_json(
            {
                "candidate": candidate.to_dict(),
                "singular_vector": singular.to_dict(),
                "converged": result.converged,
                "iterations": result.iterations,
                "residual": result.residual,
                "rayleigh": result.rayleigh,
            }
        )
        return EXIT_OK if result.converged else EXIT_NOT_CONVERGED

    # Writers

    def _write_table(self, header: list[str], rows: Sequence[Sequence[Any]]) -> None:
        if self.config.format is OutputFormat.JSON:
            self._write_json([dict(zip(header, (_plain(v) for v in row))) for row in rows])
            return
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        self._emit(buffer.getvalue())

    def _write_json(self, result: Any) -> None:
        document = {
            "artifact": ARTIFACT_NAME,
            "version": __version__,
            "config": self.config.to_dict(),
            "elapsed_ms": (time.perf_counter() - self._started) * 1000.0,
            "result": result,
        }
        self._emit(json.dumps(document, indent=2, allow_nan=True) + "\n")

    def _emit(self, text: str) -> None:
        path: Optional[Path] = self.config.output_path
        if path is None:
            sys.stdout.write(text)
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info(f"Wrote {path}")


def decades(n: int) -> list[int]:
    """Powers of ten from 10^3 up to n, with n itself appended."""
    values = []
    power = 1000
    while power < n:
        values.append(power)
        power *= 10
    values.append(n)
    return values


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _plain(value: Any) -> Any:
    """Convert numpy scalars to JSON-native values."""
    if hasattr(value, "item"):
        return value.item()
    return value
