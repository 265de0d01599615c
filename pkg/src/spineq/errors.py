"""Exception hierarchy shared by every module in the package."""


class SpineqError(Exception):
    """Base class for all package errors."""


class ParameterError(SpineqError, ValueError):
    """Distribution parameters violate their invariants."""


class DomainError(SpineqError, ValueError):
    """An argument lies outside the support or the allowed range."""


class DegenerateDataError(SpineqError, ValueError):
    """Data carry no dispersion (e.g. every value equal)."""


class InsufficientDataError(SpineqError, ValueError):
    """Too few observations for the requested operation."""


class FitConvergenceError(SpineqError, RuntimeError):
    """The optimizer failed to converge from every starting point.

    ``best`` holds the best parameter iterate seen, ``loglik`` its log-likelihood.
    """

    def __init__(self, message, best=None, loglik=None):
        super().__init__(message)
        self.best = best
        self.loglik = loglik


class InfiniteMeanError(SpineqError, ArithmeticError):
    """The fitted tail has an extreme value index >= 1, so the mean diverges."""


class InconsistentFitError(SpineqError, ValueError):
    """A tail fit does not belong to the sample it is combined with."""


class IngestError(SpineqError, ValueError):
    """Input file could not be read or parsed."""


class ConfigError(SpineqError, ValueError):
    """Invalid run configuration."""
