"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: parameter and precondition problems are
validation errors (1), accuracy-domain and resource problems are runtime
errors (2).
"""


class TplError(Exception):
    """Base class for all package errors."""


class ParameterError(TplError, ValueError):
    """A parameter lies outside its admissible set."""


class RegimeError(ParameterError):
    """The operation is not defined for the parameter regime (e.g. gamma < 0)."""


class DomainError(TplError, ArithmeticError):
    """A numerical kernel was asked to evaluate outside its accuracy domain."""


class ResourceError(TplError, RuntimeError):
    """A sampler or evaluation would exceed its work budget."""


class DegradedAccuracyWarning(UserWarning):
    """Result computed by a fallback path with weaker accuracy guarantees."""
