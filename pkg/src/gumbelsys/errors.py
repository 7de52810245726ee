"""Semantic exception hierarchy for the package."""

from __future__ import annotations

__all__ = ["GumbelSysError", "DomainError", "UsageError", "NumericsError"]


class GumbelSysError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GumbelSysError, ValueError):
    """A numeric input lies outside the mathematical domain of an operation.

    Examples: non-finite abscissa, probability outside (0, 1), negative
    argument to a nonnegative-domain function, conditioning time past the
    representable upper tail.
    """


class UsageError(GumbelSysError, ValueError):
    """A structural misuse of the API.

    Examples: topology mismatch between a system and an operation, unequal
    scale parameters in a two-system comparison, vector length mismatch,
    a non-symmetric function passed where symmetry is required.
    """


class NumericsError(GumbelSysError, ArithmeticError):
    """A computation produced non-finite intermediate values unexpectedly."""
