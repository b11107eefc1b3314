"""Exception hierarchy shared by all hek modules."""


class HekError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HekError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole of a rational expression."""


class TruncationError(HekError):
    """A series hit its term cap before the tail bound met the tolerance."""


class QuadratureError(HekError):
    """A numerical integral failed to converge or failed a residual check."""
