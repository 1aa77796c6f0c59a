"""Exception hierarchy shared across the package.

Every error deliberately raised by library code derives from LowcellError so
callers (and the command line driver) can tell our failure modes apart from
genuine bugs.
"""

from __future__ import annotations


class LowcellError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(LowcellError, ValueError):
    """Invalid group configuration (orders, weights, parity constraint)."""


class DomainError(LowcellError, ValueError):
    """An operation was called on an element outside its domain."""


class NodeCapExceeded(LowcellError, RuntimeError):
    """The word-problem search exceeded its node budget.

    This is a resource signal, never a wrong answer: callers may retry with a
    larger cap.
    """


class OutOfBallError(LowcellError, RuntimeError):
    """A product or table lookup left the enumerated ball.

    Callers must supply a ball large enough for the computation (a product of
    elements of lengths a and b needs radius a + b); we fail loudly instead of
    truncating support.
    """


class InvariantViolation(LowcellError, RuntimeError):
    """A structural fact that should hold mathematically failed to hold.

    Raised e.g. when the bar-fixing solve meets a non-skew obstruction or when
    a lowest-cell element admits no (or several) canonical factorizations.
    """
