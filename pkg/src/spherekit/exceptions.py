# -*- coding: utf-8 -*-
"""
Errors raised by spherekit.

Parameter problems are ``ValueError`` subclasses so callers that only know
about the builtin hierarchy keep working.

SPDX-License-Identifier: MIT
"""


class SpherekitError(Exception):
    """Base class of all spherekit errors."""


class InvalidParameterError(SpherekitError, ValueError):
    """A parameter is outside the supported range."""


class InvalidDimensionError(InvalidParameterError):
    """Sphere dimension below 2 or dimensions that do not match."""


class UnsupportedParametersError(InvalidParameterError):
    """A request the constructions do not cover (e.g. m < 1)."""


class DomainError(InvalidParameterError):
    """A value outside the domain of a function or parameter family."""


class PreconditionError(SpherekitError, ValueError):
    """An operation was called on input that does not meet its
    precondition."""


class HypothesisError(PreconditionError):
    """A hypothesis of a bound could not be certified."""


class ParseError(SpherekitError, ValueError):
    """Text input that cannot be read as numbers."""


class CodeFormatError(SpherekitError, ValueError):
    """A weighted code violates one of its invariants."""


class NumericFailureError(SpherekitError, ArithmeticError):
    """A numerical routine failed.

    Parameters
    ----------
    message : str
        Description of the failure.
    family : object
        The polynomial family involved, if any.
    degree : int
        The degree involved, if any.
    """

    def __init__(self, message, family=None, degree=None):
        super().__init__(message)
        self.family = family
        self.degree = degree


class InternalConsistencyError(SpherekitError, RuntimeError):
    """A result contradicts a property that holds for correct input.

    Seeing this error points to a bug or to tolerances that are too loose.
    """
