"""Exception hierarchy shared across the package."""


class AntidoteError(Exception):
    """Base class for all package errors."""


class NumericsError(AntidoteError):
    """Bad input to a linear-algebra routine (non-square, non-symmetric, ...)."""


class NotSpdError(NumericsError):
    """Matrix failed the positive-definiteness check during factorization."""


class ConvergenceError(AntidoteError):
    """An iterative solver hit its iteration cap before reaching tolerance."""


class DataError(AntidoteError):
    """Invalid dataset input (missing column, too few groups, empty data)."""


class ConfigError(AntidoteError):
    """Invalid configuration or argument combination."""
