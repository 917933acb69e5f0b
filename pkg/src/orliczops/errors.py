"""Exception types shared across the package."""


class OrliczError(Exception):
    """Base class for all package errors."""


class PreconditionError(OrliczError):
    """A hypothesis required by a criterion could not be certified.

    ``detail`` carries the failing certificate or the violating point so the
    caller can report it.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class ConjugationError(OrliczError):
    """Bracket growth for the conjugate maximiser exceeded the cap."""

    def __init__(self, message, partial_supremum):
        super().__init__(message)
        self.partial_supremum = partial_supremum


class QuadratureError(OrliczError):
    """Adaptive quadrature failed to converge on a segment."""

    def __init__(self, message, previous, last):
        super().__init__(message)
        self.previous = previous
        self.last = last


class ConfigError(OrliczError):
    """Configuration text failed validation; ``errors`` lists every problem."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))
