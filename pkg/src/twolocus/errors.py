"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TwoLocusError(Exception):
    """Base class for all library errors."""


class NotOnSimplex(TwoLocusError, ValueError):
    """Coordinates do not sum to one within the membership tolerance."""


class NegativeCoordinate(TwoLocusError, ValueError):
    """A coordinate is below zero by more than the membership tolerance."""


class InvalidParameters(TwoLocusError, ValueError):
    """Recombination parameters outside [0, 1]."""


class NotAFixedPoint(TwoLocusError, ValueError):
    pass


class SpectrumMismatch(TwoLocusError, ArithmeticError):
    """Closed-form and numeric Jacobian eigenvalues disagree."""


class OutOfSlice(TwoLocusError, ValueError):
    """Slice coordinates violate 0 <= x <= alpha or 0 <= u <= 1 - alpha."""


class DegenerateLimit(TwoLocusError, ZeroDivisionError):
    """The limit matrix does not exist because (1-alpha)*a + alpha*b == 0."""


class RateUndefined(TwoLocusError, ValueError):
    """The trajectory has too few usable steps to estimate a contraction rate."""


class MaxStepsExceeded(TwoLocusError, RuntimeError):
    """Iteration hit ``max_steps`` before the stopping rule fired.

    The partial, non-converged report is attached as ``report``.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class UsageError(TwoLocusError, ValueError):
    """Bad command-line input or configuration."""


class IoError(TwoLocusError, OSError):
    """Writing an output artifact failed."""
