"""Exception hierarchy. Each class carries the CLI exit status it maps to."""


class RatLDPError(Exception):
    exit_code = 1


class ModelError(RatLDPError, ValueError):
    """Malformed model file or a representation violating the basic invariants."""

    exit_code = 1


class NotPrimitiveError(RatLDPError, ValueError):
    exit_code = 2


class ConvergenceError(RatLDPError, ArithmeticError):
    exit_code = 3


class DomainError(RatLDPError, ValueError):
    """Request outside the admissible range (x outside (U, V), |t| too large, n too large)."""

    exit_code = 4
