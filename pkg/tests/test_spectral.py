"""Tests for the candidate vector, power iteration and the cosine statistic."""

import math

import numpy as np
import pytest

from redheffer.core.number_theory import record_indices, sieve_tables
from redheffer.core.operators import RedhefferOperator, b_matrix
from redheffer.core.spectral import (
    b_similarity_statistic,
    candidate_vector,
    cosine_similarity,
    power_iteration,
    prime_vs_composite_profile,
    similarity_statistic,
)
from redheffer.utils.validators import ValidationError

from .conftest import redheffer_dense

SINGULAR_RECORDS_TO_1000 = [1, 2, 4, 6, 12, 24, 36, 48, 60, 120, 180, 240, 360, 720, 840]


@pytest.fixture(scope="module")
def singular_1000(tables):
    return power_iteration(RedhefferOperator(1000, tables), tol=1e-10)


class TestCandidateVector:
    def test_entries(self, tables):
        v = candidate_vector(1000, tables)
        assert v[0] == 1.0
        assert v[11] == pytest.approx(28 / 12)
        assert v[996] == pytest.approx(1 + 1 / 997)

    def test_divisor_reciprocal_sums(self, tables):
        v = candidate_vector(300, tables)
        for k in range(1, 301):
            expected = sum(1 / d for d in range(1, k + 1) if k % d == 0)
            assert v[k - 1] == pytest.approx(expected, rel=1e-14)

    def test_norm_growth(self, tables):
        v = candidate_vector(10_000, tables)
        assert 2.9 <= np.dot(v, v) / 10_000 <= 3.1

    def test_requires_cover(self):
        with pytest.raises(ValidationError):
            candidate_vector(11, sieve_tables(10))


class TestPowerIteration:
    def test_one_by_one(self, tables):
        result = power_iteration(RedhefferOperator(1, tables))
        np.testing.assert_allclose(result.eigenvector, [1.0])
        assert result.rayleigh == pytest.approx(1.0)
        assert result.iterations == 1
        assert result.converged

    def test_two_by_two(self, tables):
        result = power_iteration(RedhefferOperator(2, tables))
        assert result.rayleigh == pytest.approx(4.0)
        np.testing.assert_allclose(result.eigenvector, [1 / math.sqrt(2)] * 2)
        assert result.singular_value == pytest.approx(2.0)

    def test_unit_and_nonnegative(self, singular_1000):
        u = singular_1000.eigenvector
        assert np.linalg.norm(u) == pytest.approx(1.0, abs=1e-12)
        assert np.all(u >= 0)
        assert singular_1000.converged

    def test_records_of_singular_vector(self, singular_1000):
        records = record_indices(singular_1000.eigenvector, start=2)
        assert records == SINGULAR_RECORDS_TO_1000

    def test_rayleigh_is_squared_singular_value(self, tables, singular_1000):
        op = RedhefferOperator(1000, tables)
        au = op.apply_forward(singular_1000.eigenvector)
        assert np.dot(au, au) == pytest.approx(singular_1000.rayleigh, rel=1e-9)

    def test_rayleigh_dominates_candidate(self, tables, singular_1000):
        op = RedhefferOperator(1000, tables)
        v = candidate_vector(1000, tables)
        v = v / np.linalg.norm(v)
        assert singular_1000.rayleigh > np.dot(v, op.apply_gram(v))

    @pytest.mark.parametrize("n", [10, 100, 1000])
    def test_converged_means_small_residual(self, tables, n):
        tol = 1e-10
        result = power_iteration(RedhefferOperator(n, tables), tol=tol)
        assert result.converged
        assert result.residual <= tol * result.rayleigh

    def test_settled_rayleigh_is_not_enough(self, tables):
        op = RedhefferOperator(1000, tables)
        loose = power_iteration(op, tol=1e-6)
        tight = power_iteration(op, tol=1e-10)
        assert tight.iterations > loose.iterations
        assert tight.residual <= 1e-10 * tight.rayleigh

    def test_iteration_limit_is_flagged(self, tables):
        result = power_iteration(RedhefferOperator(100, tables), max_iter=1)
        assert not result.converged
        assert result.iterations == 1
        assert result.residual > 0

    def test_rejects_bad_tolerance(self, tables):
        with pytest.raises(ValidationError):
            power_iteration(RedhefferOperator(10, tables), tol=0.0)


class TestSimilarity:
    def test_singular_vector_has_unit_cosine(self, tables):
        op = RedhefferOperator(500, tables)
        result = power_iteration(op, tol=1e-12)
        assert cosine_similarity(op, result.eigenvector).statistic >= 1 - 1e-8
        assert cosine_similarity(op, candidate_vector(500, tables)).statistic < 1 - 1e-4

    def test_one_by_one(self):
        assert similarity_statistic(1).statistic == pytest.approx(1.0)

    def test_thousand(self, tables):
        report = similarity_statistic(1000, tables)
        assert report.statistic == pytest.approx(0.989787, abs=1e-5)
        assert report.statistic == pytest.approx(
            report.inner / (report.norm_v * report.norm_gram_v)
        )
        assert report.elapsed_ms >= 0

    def test_thousand_matches_dense(self, tables):
        a = redheffer_dense(1000).astype(np.float64)
        v = candidate_vector(1000, tables)
        gram_v = a.T @ (a @ v)
        dense = np.dot(v, gram_v) / (np.linalg.norm(v) * np.linalg.norm(gram_v))
        assert similarity_statistic(1000, tables).statistic == pytest.approx(dense, abs=1e-12)

    def test_increases_with_n(self, tables):
        values = [similarity_statistic(n, tables).statistic for n in (500, 1000, 2000, 5000)]
        assert values == sorted(values)
        assert len(set(values)) == len(values)
        assert values[0] == pytest.approx(0.98515, abs=1e-5)
        assert values[-1] == pytest.approx(0.99535, abs=1e-5)

    def test_gcd_sums_emerge(self, tables):
        inner_gaps = []
        for n in (1000, 10_000, 50_000):
            report = similarity_statistic(n, tables)
            inner_gaps.append(abs(report.inner_over_n2 - 5.60422))
            assert report.norm_gram_v_over_n32**2 == pytest.approx(10.4933, abs=5e-3)
        assert inner_gaps[0] > inner_gaps[1] > inner_gaps[2]
        assert inner_gaps[2] < 5e-3
        assert report.norm_gram_v_over_n32**2 == pytest.approx(10.4933, abs=2e-3)

    def test_fifty_thousand(self, tables):
        report = similarity_statistic(50_000, tables)
        assert report.statistic == pytest.approx(0.99754, abs=5e-4)
        assert report.norm_v_squared_over_n == pytest.approx(3.005142, abs=0.01)

    def test_scale_invariance(self, tables):
        op = RedhefferOperator(5000, tables)
        v = candidate_vector(5000, tables)
        base = cosine_similarity(op, v).statistic
        for scale in (1e-3, 7.25, 1e4):
            assert cosine_similarity(op, scale * v).statistic == pytest.approx(base, abs=1e-12)

    def test_sieves_when_tables_omitted(self, tables):
        assert similarity_statistic(300).statistic == pytest.approx(
            similarity_statistic(300, tables).statistic, abs=1e-15
        )

    def test_b_statistic_matches_dense(self, tables):
        v = candidate_vector(1000, tables)
        bv = b_matrix(1000, tables).astype(np.float64) @ v
        dense = np.dot(v, bv) / (np.linalg.norm(v) * np.linalg.norm(bv))
        b = b_similarity_statistic(1000, tables)
        assert b == pytest.approx(dense, rel=1e-12)
        assert 0.95 < b <= 1.0

    def test_report_dict(self, tables):
        data = similarity_statistic(100, tables).to_dict()
        assert {"n", "statistic", "inner_over_n2", "norm_gram_v_over_n32"} <= data.keys()


class TestProfile:
    def test_candidate(self, tables):
        profile = prime_vs_composite_profile(candidate_vector(1000, tables), tables)
        assert 1.0 < profile.prime_mean < 1.1
        assert profile.composite_mean > profile.twice_prime_mean > profile.prime_mean
        assert profile.minimum == 1.0

    def test_all_ones(self, tables):
        profile = prime_vs_composite_profile(np.ones(1000), tables)
        assert profile.records == [1]
        assert profile.prime_mean == profile.composite_mean == 1.0

    def test_singular_vector(self, tables, singular_1000):
        profile = prime_vs_composite_profile(singular_1000.eigenvector, tables, record_start=2)
        assert profile.prime_mean < profile.composite_mean
        assert profile.records == SINGULAR_RECORDS_TO_1000

    def test_empty_class_is_nan(self, tables):
        profile = prime_vs_composite_profile(np.ones(6), tables)
        assert math.isnan(profile.composite_mean)
        assert profile.to_dict()["min"] == 1.0
