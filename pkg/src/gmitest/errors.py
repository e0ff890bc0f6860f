"""Exception hierarchy shared by every module of the package."""


class GmiTestError(Exception):
    """Base class for all errors raised by gmitest."""


class ZeroSample(GmiTestError, ValueError):
    """The counts table has total n = 0."""


class ParseError(GmiTestError, ValueError):
    """A counts file could not be parsed into a nonnegative integer grid."""


class DegenerateInput(GmiTestError, ValueError):
    """A distribution has no positive cell, or a parameter is out of range."""


class ZeroCellInSupport(DegenerateInput):
    """A strictly positive table was required but a cell is zero."""


class DomainError(GmiTestError, ValueError):
    """A scalar argument lies outside the domain of a function."""


class InvalidDf(GmiTestError, ValueError):
    """Degrees of freedom below one."""


class InsufficientSupport(GmiTestError):
    """Fewer than two occupied rows or fewer than two occupied columns."""


class DegenerateVariance(GmiTestError):
    """The estimated asymptotic variance is numerically zero."""


class InternalError(GmiTestError, RuntimeError):
    """An invariant that should hold by construction was violated."""
