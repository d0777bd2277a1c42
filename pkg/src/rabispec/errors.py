"""Exception hierarchy shared by every module."""


class RabiError(Exception):
    """Base class for all errors raised by rabispec."""


class ParameterError(RabiError, ValueError):
    """Invalid model parameters or configuration (CLI exit code 2)."""


class NonPositiveFrequency(ParameterError):
    pass


class NonFinite(ParameterError):
    pass


class ZeroCoupling(ParameterError):
    """The G-function path needs g > 0."""


class ZeroSplitting(ParameterError):
    """The G-function path needs delta > 0; delta = 0 is handled analytically."""


class UnsupportedCoupling(ParameterError):
    """g/omega outside the window where the series is validated; use the oracle."""


class PoleAt(RabiError, ArithmeticError):
    """Evaluation requested within the pole margin of x = n * omega."""

    def __init__(self, n: int, x: float):
        super().__init__(f"x={x!r} lies within the pole margin of pole n={n}")
        self.n = n
        self.x = x


class TruncationNotConverged(RabiError):
    """Series tail did not settle within max_terms. ``partial`` holds the best estimate."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class LostBracket(RabiError):
    pass


class NoConvergence(RabiError):
    """Eigensolver hit its iteration cap. Treated as a bug for the matrices used here."""


class NotConverged(RabiError):
    """Oracle spectrum moved by more than the tolerance under a larger Fock cutoff."""
