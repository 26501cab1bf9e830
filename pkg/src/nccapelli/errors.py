"""Exception types shared by every algebra in the package."""


class UsageError(ValueError):
    """Operands or arguments are incompatible (shape, ring, alphabet, range)."""


class DomainError(ArithmeticError):
    """An operation is undefined for the given value (e.g. a non-invertible constant term)."""
