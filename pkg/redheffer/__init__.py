"""Redheffer matrix experiments: sieves, matrix-free operators and gcd-series constants."""

__version__ = "1.0.0"
