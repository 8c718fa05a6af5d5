"""Exception taxonomy shared across the package."""


class CritexError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CritexError, ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class ContractError(CritexError, ValueError):
    """Inputs violate a structural contract (grid mismatch, wrong sizes)."""


class AccuracyError(CritexError, ArithmeticError):
    """A quadrature or evaluation cannot meet its accuracy contract."""


class InsufficientDataError(CritexError, RuntimeError):
    """Too few usable samples to perform a requested fit."""
