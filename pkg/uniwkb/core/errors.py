"""
errors.py
---------
Exception hierarchy shared by every uniwkb module.

UniformWKBError
├── RequestError      – the request is inconsistent with the physics or the
│                       supported ranges (CLI exit code 2)
└── NumericalError    – a numerical procedure failed on a valid request
                        (CLI exit code 3)

RequestError subclasses ValueError and NumericalError subclasses
ArithmeticError, so callers that only know the builtin types still work.
"""
from __future__ import annotations

from typing import Optional


class UniformWKBError(Exception):
    exit_code = 1


# ── Request errors (exit 2) ───────────────────────────────────────────────────

class RequestError(UniformWKBError, ValueError):
    exit_code = 2


class ValidationError(RequestError):
    """Bad parameters, ranges, methods or CLI input."""


class DomainError(RequestError):
    """x outside the potential's domain or on a pole."""


class UnsupportedPotentialError(RequestError):
    pass


class NoBoundStateError(RequestError):
    pass


class MethodInapplicableError(RequestError):
    pass


class BoundaryError(RequestError):
    """Boundary condition incompatible with the turning-point topology."""


class OffShellError(RequestError):
    pass


class NoScatteringError(RequestError):
    pass


class SpecialFunctionRangeError(RequestError):
    pass


# ── Numerical errors (exit 3) ─────────────────────────────────────────────────

class NumericalError(UniformWKBError, ArithmeticError):
    exit_code = 3


class SelectionFailureError(NumericalError):
    pass


class DegenerateExtremeError(NumericalError):
    pass


class ClassificationError(NumericalError):
    pass


class UnsupportedTopologyError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class ExtentError(NumericalError):
    pass


class SpecialFunctionOverflowError(NumericalError):
    """Raised when an unscaled value would overflow.

    ``scaled_value`` is the mantissa and ``log_scale`` the exponent, so the
    true value is ``scaled_value * exp(log_scale)``.
    """

    def __init__(self, message: str, scaled_value: float, log_scale: float,
                 error: Optional[float] = None):
        super().__init__(message)
        self.scaled_value = scaled_value
        self.log_scale = log_scale
        self.error = error


def exit_code_for(exc: BaseException) -> int:
    """CLI exit code for an exception raised by the library."""
    return getattr(exc, "exit_code", 1)
