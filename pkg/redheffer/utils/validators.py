"""Input validation utilities.

This module provides validation functions for dimensions, cutoffs and
tolerances shared by the library operations and the command line.
"""

import math
import numbers
from typing import Tuple


class ValidationError(ValueError):
    """Raised when an argument is invalid."""

    pass


def validate_dimension(n: int, name: str = "n") -> Tuple[bool, str]:
    """Validate a positive dimension or index bound.

    Args:
        n: Value to validate
        name: Argument name used in the message

    Returns:
        Tuple of (is_valid, error_message)
    """
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        return False, f"{name} must be an integer, got {type(n).__name__}"

    if n < 1:
        return False, f"{name} must be >= 1, got {n}"

    return True, ""


def validate_cutoff_pair(lo: int, hi: int) -> Tuple[bool, str]:
    """Validate an ordered pair of cutoffs N1 < N2.

    Args:
        lo: Lower cutoff
        hi: Upper cutoff

    Returns:
        Tuple of (is_valid, error_message)
    """
    for name, value in (("N1", lo), ("N2", hi)):
        valid, message = validate_dimension(value, name)
        if not valid:
            return False, message

    if lo >= hi:
        return False, f"N1 must be smaller than N2, got N1={lo}, N2={hi}"

    return True, ""


def validate_tolerance(tol: float) -> Tuple[bool, str]:
    """Validate a convergence tolerance.

    Args:
        tol: Tolerance

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not math.isfinite(tol) or tol <= 0:
        return False, f"tolerance must be a positive finite number, got {tol}"

    return True, ""


def validate_vector_length(length: int, n: int) -> Tuple[bool, str]:
    """Validate that a vector matches the operator dimension.

    Args:
        length: Length of the vector
        n: Expected dimension

    Returns:
        Tuple of (is_valid, error_message)
    """
    if length != n:
        return False, f"dimension mismatch: vector has length {length}, expected {n}"

    return True, ""


def require(check: Tuple[bool, str]) -> None:
    """Raise ValidationError when a validator reports failure.

    Args:
        check: Result of one of the validate_* functions

    Raises:
        ValidationError: If the check failed
    """
    valid, message = check
    if not valid:
        raise ValidationError(message)
