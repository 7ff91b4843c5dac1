"""Tests for the gcd series, extrapolation and alpha."""

import math

import numpy as np
import pytest

from redheffer.core.constants import (
    ALPHA_PREFACTOR,
    NORM_CONSTANT,
    compute_alpha,
    double_gcd_sum_divisor_form,
    double_gcd_sum_unweighted,
    double_gcd_sum_weighted,
    extrapolate,
    sum_cd_squared,
    vector_norm_table,
)
from redheffer.core.number_theory import gcd_constants, sieve_tables
from redheffer.core.spectral import similarity_statistic
from redheffer.data.models import ExtrapolationEstimate
from redheffer.utils.numerics import ZETA2
from redheffer.utils.validators import ValidationError

from .conftest import TABLE_BOUND


def _estimate(limit):
    return ExtrapolationEstimate(
        cutoff_lo=1, cutoff_hi=2, sum_lo=limit, sum_hi=limit, tail_coefficient=0.0, limit=limit
    )


@pytest.fixture(scope="module")
def million_constants():
    return gcd_constants(10**6, sieve_tables(10**6))


class TestSingleSum:
    def test_small_cutoffs(self, constants):
        assert sum_cd_squared(1, constants) == pytest.approx(ZETA2**2, rel=1e-15)
        assert sum_cd_squared(2, constants) == pytest.approx(ZETA2**2 * (1 + 25 / 64), rel=1e-14)
        assert sum_cd_squared(2, constants) == pytest.approx(3.762764, abs=1e-6)

    def test_table_too_small(self, constants):
        with pytest.raises(ValidationError):
            sum_cd_squared(constants.L + 1, constants)

    @pytest.mark.slow
    def test_million(self, million_constants):
        assert sum_cd_squared(10**6, million_constants) == pytest.approx(5.60421, abs=1e-5)
        estimate = extrapolate(lambda D: sum_cd_squared(D, million_constants), 10**5, 10**6)
        assert estimate.tail_coefficient == pytest.approx(5.2881, abs=0.01)
        assert estimate.limit == pytest.approx(5.60422, abs=5e-5)
        assert estimate.limit >= estimate.sum_hi

    def test_extrapolation_self_consistent(self, constants):
        first = extrapolate(lambda D: sum_cd_squared(D, constants), 5000, 10_000)
        second = extrapolate(lambda D: sum_cd_squared(D, constants), 10_000, 20_000)
        assert abs(first.limit - second.limit) < first.tail_coefficient / 10_000


class TestDoubleSums:
    def test_weighted_small_cutoffs(self, constants):
        assert double_gcd_sum_weighted(1, constants) == pytest.approx(ZETA2**2, rel=1e-15)
        assert double_gcd_sum_weighted(2, constants) == pytest.approx(
            ZETA2**2 * (1 + 5 / 8 + 25 / 128), rel=1e-14
        )

    def test_unweighted_small_cutoffs(self):
        assert double_gcd_sum_unweighted(1) == 1.0
        assert double_gcd_sum_unweighted(2) == pytest.approx(1.625, rel=1e-15)

    def test_symmetric_matches_full_square(self, constants):
        triangle = double_gcd_sum_weighted(500, constants)
        square = double_gcd_sum_weighted(500, constants, symmetric=False)
        assert triangle == pytest.approx(square, rel=1e-12)

    def test_matches_brute_force(self, constants):
        D = 40
        w = constants.weights(D)
        brute = sum(
            w[a - 1] * w[b - 1] * math.gcd(a, b) for a in range(1, D + 1) for b in range(1, D + 1)
        )
        assert double_gcd_sum_weighted(D, constants) == pytest.approx(brute, rel=1e-13)

    def test_divisor_form(self, tables, constants):
        D = 500
        assert double_gcd_sum_divisor_form(D, constants.weights(D), tables) == pytest.approx(
            double_gcd_sum_weighted(D, constants), rel=1e-12
        )
        d = np.arange(1, D + 1, dtype=np.float64)
        assert double_gcd_sum_divisor_form(D, 1.0 / (d * d), tables) == pytest.approx(
            double_gcd_sum_unweighted(D), rel=1e-12
        )

    def test_divisor_form_rejects_wrong_shape(self, tables):
        with pytest.raises(ValidationError):
            double_gcd_sum_divisor_form(10, np.ones(9), tables)

    def test_threads_do_not_change_result(self, constants):
        single = double_gcd_sum_weighted(700, constants, threads=1)
        assert double_gcd_sum_weighted(700, constants, threads=4) == single

    def test_weighted_dominates_unweighted(self, constants):
        for D in (1, 2, 10, 100, 1000):
            assert double_gcd_sum_weighted(D, constants) >= double_gcd_sum_unweighted(D)

    def test_unweighted_limit(self):
        estimate = extrapolate(double_gcd_sum_unweighted, 1000, 2000)
        assert estimate.limit == pytest.approx(NORM_CONSTANT, abs=1e-2)

    @pytest.mark.slow
    def test_unweighted_limit_ten_thousand(self):
        estimate = extrapolate(double_gcd_sum_unweighted, 5000, 10_000)
        assert estimate.limit == pytest.approx(NORM_CONSTANT, abs=2e-3)

    @pytest.mark.slow
    def test_weighted_ten_thousand(self, constants):
        estimate = extrapolate(
            lambda D: double_gcd_sum_weighted(D, constants, threads=0), 5000, 10_000
        )
        assert estimate.sum_hi == pytest.approx(10.4912, abs=5e-4)
        assert estimate.limit == pytest.approx(10.4933, abs=1e-3)
        assert estimate.tail_coefficient == pytest.approx(20.5, abs=1.0)


class TestExtrapolate:
    def test_constant_series(self):
        estimate = extrapolate(lambda N: 7.0, 10, 100)
        assert estimate.tail_coefficient == 0.0
        assert estimate.limit == 7.0

    def test_exact_power_tail(self):
        estimate = extrapolate(lambda N: 3.0 - 2.0 / N, 100, 1000)
        assert estimate.tail_coefficient == pytest.approx(2.0, rel=1e-10)
        assert estimate.limit == pytest.approx(3.0, rel=1e-12)

    def test_other_exponent(self):
        estimate = extrapolate(lambda N: 1.0 - 5.0 / N**2, 10, 20, tail_exponent=2.0)
        assert estimate.limit == pytest.approx(1.0, rel=1e-12)

    def test_log_tail(self):
        estimate = extrapolate(lambda N: 4.0 - math.log(N) / N, 50, 500, tail_model="log")
        assert estimate.limit == pytest.approx(4.0, rel=1e-12)
        assert estimate.to_dict()["tail_model"] == "log"

    def test_invalid_arguments(self):
        with pytest.raises(ValidationError):
            extrapolate(lambda N: 1.0, 100, 100)
        with pytest.raises(ValidationError):
            extrapolate(lambda N: 1.0, 10, 100, tail_model="cubic")


class TestAlpha:
    def test_published_limits(self):
        report = compute_alpha(_estimate(5.60422), _estimate(10.4933))
        assert report.alpha == pytest.approx(0.997992, abs=2e-5)
        assert report.prefactor == ALPHA_PREFACTOR

    def test_identity_case(self):
        s2 = 10.0
        s1 = math.sqrt(NORM_CONSTANT * s2)
        assert compute_alpha(_estimate(s1), _estimate(s2)).alpha == pytest.approx(1.0, rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            compute_alpha(_estimate(5.6), _estimate(0.0))
        with pytest.raises(ValidationError):
            compute_alpha(_estimate(math.nan), _estimate(10.0))

    def test_small_cutoffs(self, constants):
        s1 = extrapolate(lambda D: sum_cd_squared(D, constants), 50, 100)
        s2 = extrapolate(lambda D: double_gcd_sum_weighted(D, constants), 50, 100)
        report = compute_alpha(s1, s2)
        assert report.alpha == pytest.approx(0.998, abs=0.01)
        assert report.to_dict()["s1_estimate"]["cutoff_hi"] == 100

    @pytest.mark.slow
    def test_alpha_and_statistic_agree(self, million_constants):
        s1 = extrapolate(lambda D: sum_cd_squared(D, million_constants), 10**5, 10**6)
        s2 = extrapolate(
            lambda D: double_gcd_sum_weighted(D, million_constants, threads=0), 5000, 10_000
        )
        report = compute_alpha(s1, s2)
        assert report.alpha == pytest.approx(0.997992, abs=1e-4)
        assert report.alpha <= 1 + 1e-10
        assert abs(similarity_statistic(50_000).statistic - report.alpha) < 5e-4


class TestNormTable:
    def test_direct_sum(self, tables):
        table = dict(vector_norm_table([1, 1000, 10_000], tables))
        assert table[1] == 1.0
        assert table[10_000] == pytest.approx(NORM_CONSTANT, abs=0.05)

    def test_three_routes_agree(self, tables):
        direct = vector_norm_table([TABLE_BOUND], tables)[0][1]
        double_sum = extrapolate(double_gcd_sum_unweighted, 2000, 4000).limit
        routes = [direct, NORM_CONSTANT, double_sum]
        for a in routes:
            for b in routes:
                assert abs(a - b) < 1e-2

    @pytest.mark.slow
    def test_million(self):
        table = vector_norm_table([10**3, 10**4, 10**5, 10**6], sieve_tables(10**6))
        gaps = [abs(value - NORM_CONSTANT) for _, value in table]
        assert gaps == sorted(gaps, reverse=True)
        assert len(set(gaps)) == len(gaps)
        assert gaps[-1] < 0.01
