"""Numeric field contract and tolerance policy.

Two arithmetic backends satisfy the same contract:

* exact rationals (:class:`fractions.Fraction`, arbitrary precision), and
* IEEE-754 binary64 (:class:`float`).

Every function in the package is written generically over the four field
operations, so the backend is chosen by the type of the numbers passed in.
Ints are accepted anywhere and promoted to ``Fraction`` in exact mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]

FLOAT_EPS_MEMBERSHIP = 1e-12
FLOAT_EPS_CONVERGENCE = 1e-10
RATIONAL_EPS_CONVERGENCE = Fraction(1, 10**10)

# Successive differences below this are treated as rounding noise.
NOISE_FLOOR = 100 * 2.220446049250313e-16


@dataclass(frozen=True)
class Tolerance:
    """Slack used for simplex/fixed-point membership and orbit stopping.

    Use :meth:`floating` or :meth:`rational` for the defaults.
    """

    eps_membership: Scalar = FLOAT_EPS_MEMBERSHIP
    eps_convergence: Scalar = FLOAT_EPS_CONVERGENCE

    def __post_init__(self):
        if self.eps_membership < 0 or self.eps_convergence < 0:
            raise ValueError("tolerances must be non-negative")
        exact = is_exact(self.eps_membership) and is_exact(self.eps_convergence)
        if not exact and (self.eps_membership <= 0 or self.eps_convergence <= 0):
            raise ValueError("floating-mode tolerances must be strictly positive")

    @classmethod
    def floating(cls) -> "Tolerance":
        return cls(FLOAT_EPS_MEMBERSHIP, FLOAT_EPS_CONVERGENCE)

    @classmethod
    def rational(cls) -> "Tolerance":
        return cls(Fraction(0), RATIONAL_EPS_CONVERGENCE)

    @classmethod
    def for_values(cls, *values) -> "Tolerance":
        """Default tolerance for the backend the given values belong to."""
        return cls.rational() if all(is_exact(v) for v in values) else cls.floating()


def is_exact(value) -> bool:
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def as_scalar(value, exact: bool) -> Scalar:
    """Convert ``value`` into the requested backend.

    Floats converted to the exact backend keep their binary value; pass
    strings through :func:`parse_scalar` to get decimal semantics instead.
    """
    if exact:
        if isinstance(value, str):
            return parse_scalar(value, exact=True)
        return Fraction(value)
    return float(value)


def parse_scalar(text: str, exact: bool) -> Scalar:
    """Parse ``"0.25"``, ``"1e-10"`` or ``"p/q"`` into a backend scalar.

    In exact mode decimals are read as the rational they denote, so
    ``"0.1"`` becomes ``1/10``.  In floating mode ``"p/q"`` is divided in
    exact arithmetic first and then rounded once.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty number")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    return value if exact else float(value)


def format_scalar(value: Scalar) -> str:
    """Serialize as ``"p/q"`` (exact) or the shortest round-trip decimal."""
    if is_exact(value):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def approx_eq(lhs: Scalar, rhs: Scalar, eps: Scalar) -> bool:
    """True iff ``|lhs - rhs| <= eps``; exact equality when both are rational and eps is 0."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return abs(lhs - rhs) <= eps

