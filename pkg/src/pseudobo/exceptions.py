"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so new error types should
subclass one of the three roots below rather than raising bare exceptions.
"""


class PseudoBOError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(PseudoBOError, ValueError):
    """Invalid configuration, weights, arity or domain input (exit code 2)."""


class DomainError(ConfigError):
    """A point lies outside the declared search box."""


class NumericalError(PseudoBOError, ArithmeticError):
    """Linear algebra failure that survived jitter escalation (exit code 3)."""


class CalibrationError(PseudoBOError, RuntimeError):
    """No finite interval multiplier can cover the validation data."""


class ExternalObjectiveError(PseudoBOError, RuntimeError):
    """The external objective subprocess misbehaved (exit code 4)."""
