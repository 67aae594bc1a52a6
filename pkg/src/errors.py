"""
errors.py - Exception hierarchy

Every failure the library raises derives from SecrecyRateError, so callers
(and the CLI) can catch the whole family in one place. Infeasible problem
instances are reported through SolveStatus, not through exceptions.
"""


class SecrecyRateError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(SecrecyRateError, ValueError):
    """Invalid scenario parameters, sweep definitions or run options."""


class DegenerateVarianceError(ConfigurationError):
    """A channel draw came out zero or non-finite."""


class DimensionError(SecrecyRateError, ValueError):
    """Array shapes or subspace dimensions don't fit the request."""


class DomainError(SecrecyRateError, ValueError):
    """An argument lies outside its mathematical domain."""


class IllConditionedPairError(SecrecyRateError, ArithmeticError):
    """A Hermitian pair whose denominator is (numerically) singular."""


class SingularEavesdropperCorrelationError(SecrecyRateError, ArithmeticError):
    """The eavesdropper's AN correlation matrix X cannot be inverted."""


class DegenerateBeamError(SecrecyRateError, ArithmeticError):
    """The beam carries no power toward the backscatter device (A = 0)."""


class NumericalError(SecrecyRateError, ArithmeticError):
    """An iterate became non-finite."""
