"""Exception types shared across the package."""


class ExpBanditError(Exception):
    """Base class for package-specific errors."""


class ConfigError(ExpBanditError):
    """Invalid experiment configuration (bad key, value, or combination)."""


class DataFormatError(ExpBanditError):
    """Malformed input data file (CSV, dataset dump, tree dump)."""


class NumericalError(ExpBanditError):
    """Numerical failure that indicates a bug rather than bad input,
    e.g. a factorization failing on a matrix that should be positive
    definite, or a posterior variance far below zero."""
