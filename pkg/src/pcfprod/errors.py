"""Exception types shared across the package."""


class PcfError(Exception):
    """Base class for all errors raised by pcfprod."""


class DomainError(PcfError, ValueError):
    """An argument lies outside the validity domain of a formula."""


class PoleError(DomainError):
    """A gamma function or recurrence coefficient hits a pole."""


class QuadratureError(PcfError, ArithmeticError):
    """A numerical integral could not be evaluated reliably."""


class ConvergenceError(PcfError, ArithmeticError):
    """A series or iteration failed to reach the requested accuracy."""
