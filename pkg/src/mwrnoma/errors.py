"""Exception hierarchy shared across the package."""


class MwrnomaError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(MwrnomaError, ValueError):
    """Invalid configuration value or violated invariant."""


class UnsupportedParameterError(ConfigurationError):
    """Parameter outside the supported model family (e.g. non-integer fading shape)."""


class NumericError(MwrnomaError, ArithmeticError):
    """Numerical failure: overflow, non-convergence, or a non-finite intermediate."""
