"""Exception types shared across the package."""

__all__ = ["DomainError", "ConvergenceError"]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine exhausted its iteration budget."""
