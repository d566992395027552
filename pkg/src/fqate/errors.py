"""Exception types shared across the package."""


class FqateError(Exception):
    """Base class for package errors."""


class ConfigError(FqateError, ValueError):
    """Invalid run configuration."""


class NumericalError(FqateError, ArithmeticError):
    """Evolution or diagonalization produced unusable numbers."""


class DegenerateSpectrumError(NumericalError):
    """Instantaneous ground state is degenerate within the gap floor."""


class DimensionCapError(NumericalError):
    """Dense oracle requested beyond the configured dimension cap."""
