# -*- coding: utf-8 -*-
"""
PluralWV Errors
Exception hierarchy shared by the library and the command-line front end
"""
import math


class PluralWVError(Exception):
    """Base class for every domain failure raised by pluralwv"""

    code = "pluralwv"
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidArgumentError(PluralWVError, ValueError):
    """Non-finite angle, out-of-domain measurement or malformed grid"""

    code = "invalid-argument"
    exit_code = 2


class OrthogonalPostselectionError(PluralWVError, ArithmeticError):
    """Post-selected state (numerically) orthogonal to the pre-selected one"""

    code = "orthogonal-postselection"
    exit_code = 2


class RangeError(PluralWVError, ValueError):
    """Search range does not contain the requested extremum"""

    code = "range"
    exit_code = 2


class ResolutionError(PluralWVError, RuntimeError):
    """Grid too coarse (or too sparse) for the requested computation"""

    code = "resolution"
    exit_code = 3


def require_finite(name: str, value: float) -> float:
    """Return value as float, raising InvalidArgumentError if it is NaN or infinite"""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value}")
    return value


def exit_code_for(code: str) -> int:
    """Process exit code for an error `code` string recorded on a failed row"""
    for cls in (InvalidArgumentError, OrthogonalPostselectionError, RangeError, ResolutionError):
        if cls.code == code:
            return cls.exit_code
    return PluralWVError.exit_code
