"""Gamete states on the 3-simplex, recombination parameters and observables.

A state ``(x, y, u, v)`` holds the frequencies of the gametes A1B1, A1B2,
A2B1 and A2B2.  The observables here are the A1 allele frequency
``alpha = x + y`` and the linkage disequilibrium ``D = y*u - x*v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import InvalidParameters, NegativeCoordinate, NotOnSimplex
from .scalars import Scalar, Tolerance, as_scalar, format_scalar, is_exact, parse_scalar


@dataclass(frozen=True, slots=True)
class GameteState:
    """Frequencies of A1B1, A1B2, A2B1, A2B2.

    The constructor does not check simplex membership; use :func:`validate`
    for untrusted input.  The evolution operator maps valid states to valid
    states, so internal code builds instances directly.
    """

    x: Scalar
    y: Scalar
    u: Scalar
    v: Scalar

    def __iter__(self) -> Iterator[Scalar]:
        return iter((self.x, self.y, self.u, self.v))

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.u, self.v)

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self)

    def __str__(self) -> str:
        return ",".join(format_scalar(c) for c in self)


@dataclass(frozen=True, slots=True)
class RecombinationParams:
    """The pair ``(a, b)`` scaling the D-increments of the A1 and A2 gametes."""

    a: Scalar
    b: Scalar

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise InvalidParameters(f"{name}={value} outside [0, 1]")

    @property
    def trivial(self) -> bool:
        """True when ``a == b == 0`` and the map is the identity."""
        return self.a == 0 and self.b == 0

    @property
    def exact(self) -> bool:
        return is_exact(self.a) and is_exact(self.b)


def validate(x, y, u, v, tol: Optional[Tolerance] = None) -> GameteState:
    """Build a state from four numbers, checking simplex membership.

    All-rational input stays rational; anything else becomes float.
    Coordinates within ``eps_membership`` outside ``[0, 1]`` are clamped.

    Raises:
        NegativeCoordinate: a coordinate is below ``-eps_membership``.
        NotOnSimplex: ``|x + y + u + v - 1| > eps_membership``.
    """
    raw = (x, y, u, v)
    exact = all(is_exact(c) for c in raw)
    coords = [as_scalar(c, exact) for c in raw]
    if tol is None:
        tol = Tolerance.rational() if exact else Tolerance.floating()
    eps = tol.eps_membership
    for name, c in zip("xyuv", coords):
        if c < -eps:
            raise NegativeCoordinate(f"{name}={format_scalar(c)} is negative")
    total = sum(coords)
    if abs(total - 1) > eps:
        raise NotOnSimplex(f"coordinates sum to {format_scalar(total)}, not 1")
    zero, one = coords[0] * 0, coords[0] * 0 + 1
    coords = [min(max(c, zero), one) for c in coords]
    return GameteState(*coords)


def parse_state(text: str, exact: bool = False, tol: Optional[Tolerance] = None) -> GameteState:
    """Parse ``"x,y,u,v"`` where each entry is a decimal or ``p/q``."""
    parts = text.replace(" ", "").split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated coordinates, got {len(parts)}: {text!r}")
    return validate(*(parse_scalar(p, exact) for p in parts), tol=tol)


def linkage_disequilibrium(s: GameteState) -> Scalar:
    """``D = y*u - x*v``; zero exactly on the fixed-point set."""
    return s.y * s.u - s.x * s.v


def alpha_of(s: GameteState) -> Scalar:
    """A1 allele frequency ``x + y``, which indexes the invariant slice."""
    return s.x + s.y


def is_fixed_point(s: GameteState, p: RecombinationParams, tol: Optional[Tolerance] = None) -> bool:
    if p.trivial:
        return True
    if tol is None:
        tol = Tolerance.for_values(*s, p.a, p.b)
    return abs(linkage_disequilibrium(s)) <= tol.eps_membership


def max_norm(lhs: Sequence[Scalar], rhs: Sequence[Scalar]) -> Scalar:
    return max(abs(p - q) for p, q in zip(lhs, rhs))
