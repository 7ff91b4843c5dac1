"""Shared fixtures and brute-force oracles."""

import math
import os
import shutil
import tempfile

import numpy as np
import pytest

# XDG cache home for the whole session; package imports stay inside fixtures
# so the log file handler is created below it
LOG_HOME = None

# Covers l * n for the scaled divisor sums and the dyadic windows up to 2^16
TABLE_BOUND = 70_000


def pytest_configure(config):
    global LOG_HOME
    LOG_HOME = tempfile.mkdtemp(prefix="redheffer-tests-")
    os.environ["XDG_CACHE_HOME"] = LOG_HOME


def pytest_unconfigure(config):
    if LOG_HOME is not None:
        shutil.rmtree(LOG_HOME, ignore_errors=True)


@pytest.fixture(scope="session")
def tables():
    from redheffer.core.number_theory import sieve_tables

    return sieve_tables(TABLE_BOUND)


@pytest.fixture(scope="session")
def constants(tables):
    from redheffer.core.number_theory import gcd_constants

    return gcd_constants(TABLE_BOUND, tables)


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep every sieve cache file inside the test's temporary directory."""
    cache_home = tmp_path / "xdg-cache"
    monkeypatch.setenv("XDG_CACHE_HOME", str(cache_home))
    monkeypatch.setenv("REDHEFFER_CACHE_DIR", str(tmp_path / "tables"))
    return tmp_path / "tables"


def naive_divisors(k):
    return [d for d in range(1, k + 1) if k % d == 0]


def naive_factorization(k):
    factors = {}
    p = 2
    while p * p <= k:
        while k % p == 0:
            factors[p] = factors.get(p, 0) + 1
            k //= p
        p += 1
    if k > 1:
        factors[k] = factors.get(k, 0) + 1
    return factors


def naive_mu(k):
    factors = naive_factorization(k)
    if any(e > 1 for e in factors.values()):
        return 0
    return (-1) ** len(factors)


def naive_phi(k):
    result = k
    for p in naive_factorization(k):
        result = result // p * (p - 1)
    return result


def redheffer_dense(n):
    return np.array(
        [[1 if j == 1 or j % i == 0 else 0 for j in range(1, n + 1)] for i in range(1, n + 1)],
        dtype=np.int64,
    )


def basis(n, k):
    """Unit vector for 1-based index k."""
    e = np.zeros(n)
    e[k - 1] = 1.0
    return e


def brute_gcd_sum(d):
    return sum(math.gcd(k, d) for k in range(1, d + 1))
