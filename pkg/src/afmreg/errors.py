"""Exception taxonomy shared by the numerical layers.

Every failure is tagged so callers (and the CLI exit-code mapping) can
tell an out-of-domain argument from a quadrature that did not converge
from a broken integrand.
"""


class AfmregError(Exception):
    """Base class for all package errors."""


class DomainError(AfmregError, ValueError):
    """Argument outside the documented domain of a function."""


class RegimeError(AfmregError, ValueError):
    """Operation called in the wrong coupling regime (e.g. Macdonald form
    with a negative squared decay parameter)."""


class ConfigError(AfmregError, ValueError):
    """Invalid or missing run configuration."""


class ConvergenceError(AfmregError, RuntimeError):
    """Adaptive integration hit its subdivision cap.

    Carries the best estimate so callers can still inspect the value.
    """

    def __init__(self, message, best_estimate, error_estimate, subdivisions):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
        self.subdivisions = subdivisions


class IntegrandError(AfmregError, RuntimeError):
    """Integrand returned a non-finite sample."""

    def __init__(self, message, location):
        super().__init__(message)
        self.location = location
