"""Invariant slices and the linear dynamics on them.

The map keeps ``alpha = x + y`` fixed, so the simplex splits into slices
``{x + y = alpha, u + v = 1 - alpha}``.  Eliminating ``y`` and ``v`` turns
the map on a slice into the linear map ``(x, u) -> M (x, u)`` with::

    M = [[1 - a + a*alpha,   a*alpha    ],
         [(1 - alpha)*b,     1 - b*alpha]]

whose eigenvalues are 1 and ``1 - (1 - alpha)*a - alpha*b``.  Powers of
``M`` have a two-term closed form, and their limit gives the end state of
every trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateLimit, OutOfSlice
from .scalars import Scalar, Tolerance, is_exact
from .state import GameteState, RecombinationParams


@dataclass(frozen=True, slots=True)
class SliceCoords:
    alpha: Scalar
    x: Scalar
    u: Scalar


@dataclass(frozen=True, slots=True)
class TransferMatrix:
    """A 2x2 matrix acting on column vectors ``(x, u)``."""

    m11: Scalar
    m12: Scalar
    m21: Scalar
    m22: Scalar

    @classmethod
    def identity(cls, like: Scalar = 0) -> "TransferMatrix":
        one, zero = like * 0 + 1, like * 0
        return cls(one, zero, zero, one)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __add__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.m11 + other.m11, self.m12 + other.m12, self.m21 + other.m21, self.m22 + other.m22
        )

    def __sub__(self, other: "TransferMatrix") -> "TransferMatrix":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "TransferMatrix":
        return TransferMatrix(c * self.m11, c * self.m12, c * self.m21, c * self.m22)

    def apply(self, x: Scalar, u: Scalar) -> tuple:
        return (self.m11 * x + self.m12 * u, self.m21 * x + self.m22 * u)

    def trace(self) -> Scalar:
        return self.m11 + self.m22

    def det(self) -> Scalar:
        return self.m11 * self.m22 - self.m12 * self.m21

    def entries(self) -> tuple:
        return (self.m11, self.m12, self.m21, self.m22)

    def max_abs_diff(self, other: "TransferMatrix") -> Scalar:
        return max(abs(p - q) for p, q in zip(self.entries(), other.entries()))


@dataclass(frozen=True, slots=True)
class EigenPair:
    lambda1: Scalar
    lambda2: Scalar


def project(s: GameteState) -> SliceCoords:
    return SliceCoords(s.x + s.y, s.x, s.u)


def lift(c: SliceCoords, tol: Optional[Tolerance] = None) -> GameteState:
    """Inverse of :func:`project`: ``(x, alpha - x, u, 1 - alpha - u)``.

    Raises:
        OutOfSlice: ``x`` or ``u`` lies outside its slice interval by more
            than ``eps_membership``.
    """
    if tol is None:
        tol = Tolerance.for_values(c.alpha, c.x, c.u)
    eps = tol.eps_membership
    if not (-eps <= c.alpha <= 1 + eps):
        raise OutOfSlice(f"alpha={c.alpha} outside [0, 1]")
    if not (-eps <= c.x <= c.alpha + eps):
        raise OutOfSlice(f"x={c.x} outside [0, alpha={c.alpha}]")
    if not (-eps <= c.u <= 1 - c.alpha + eps):
        raise OutOfSlice(f"u={c.u} outside [0, 1 - alpha]")
    return GameteState(c.x, c.alpha - c.x, c.u, 1 - c.alpha - c.u)


def transfer_matrix(alpha: Scalar, p: RecombinationParams) -> TransferMatrix:
    a, b = p.a, p.b
    return TransferMatrix(1 - a + a * alpha, a * alpha, (1 - alpha) * b, 1 - b * alpha)


def reduced_step(c: SliceCoords, p: RecombinationParams) -> SliceCoords:
    x, u = transfer_matrix(c.alpha, p).apply(c.x, c.u)
    return SliceCoords(c.alpha, x, u)


def mixing_rate(alpha: Scalar, p: RecombinationParams) -> Scalar:
    """``(1 - alpha)*a + alpha*b``, i.e. ``1 - lambda2``."""
    return (1 - alpha) * p.a + alpha * p.b


def eigenvalues(alpha: Scalar, p: RecombinationParams) -> EigenPair:
    one = alpha * 0 + 1
    return EigenPair(one, 1 - (1 - alpha) * p.a - alpha * p.b)


def _power_coefficient(rate: Scalar, n: int) -> Scalar:
    """``(lambda2**n - 1) / (lambda2 - 1)`` with ``lambda2 = 1 - rate``.

    Equals ``n`` in the confluent case ``rate == 0``.  In floating mode the
    quotient is formed as ``-expm1(n*log1p(-rate))/rate`` so that rates
    close to zero do not lose digits to cancellation.
    """
    if rate == 0:
        return rate * 0 + n
    if is_exact(rate):
        lam = 1 - rate
        return (lam**n - 1) / (lam - 1)
    if rate >= 1:
        # lambda2 == 0: every power past the first vanishes
        return 1.0
    return -math.expm1(n * math.log1p(-rate)) / rate


def matrix_power(alpha: Scalar, p: RecombinationParams, n: int) -> TransferMatrix:
    """``M**n`` from the Cayley-Hamilton identity for a matrix with eigenvalues ``{1, lambda2}``::

        M**n = (lambda2 - lambda2**n)/(lambda2 - 1) * I + (lambda2**n - 1)/(lambda2 - 1) * M

    The two coefficients sum to one, so this is evaluated as
    ``I + c (M - I)`` with ``M - I`` built directly from the parameters,
    which avoids cancellation on the diagonal.  When ``lambda2 == 1`` the
    confluent form ``c = n`` applies; it gives ``I`` for ``a = b = 0``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    ident = TransferMatrix.identity(alpha)
    if n == 0:
        return ident
    a, b = p.a, p.b
    beta = 1 - alpha
    shift = TransferMatrix(-a * beta, a * alpha, beta * b, -b * alpha)
    c = _power_coefficient(mixing_rate(alpha, p), n)
    return ident + shift.scale(c)


def repeated_power(m: TransferMatrix, n: int) -> TransferMatrix:
    """``m`` multiplied by itself ``n`` times, left to right."""
    out = TransferMatrix.identity(m.m11)
    for _ in range(n):
        out = out @ m
    return out


def limit_matrix(alpha: Scalar, p: RecombinationParams) -> TransferMatrix:
    """Rank-one projection ``lim M**n`` onto the fixed line along ``(alpha, 1 - alpha)``.

    Raises:
        DegenerateLimit: ``(1 - alpha)*a + alpha*b == 0``.
    """
    rate = mixing_rate(alpha, p)
    if rate == 0:
        raise DegenerateLimit(f"no limit matrix for alpha={alpha}, a={p.a}, b={p.b}")
    a, b = p.a, p.b
    beta = 1 - alpha
    return TransferMatrix(alpha * b, alpha * a, beta * b, beta * a).scale(1 / rate)


def limit_weight(x: Scalar, u: Scalar, s0: GameteState, p: RecombinationParams) -> Scalar:
    """``A(x, u) = (b x + a u) / ((u0 + v0) a + (x0 + y0) b)`` for the initial state ``s0``."""
    return (p.b * x + p.a * u) / ((s0.u + s0.v) * p.a + (s0.x + s0.y) * p.b)


def predicted_limit(
    s: GameteState, p: RecombinationParams, tol: Optional[Tolerance] = None
) -> GameteState:
    """Closed-form limit of the trajectory started at ``s``.

    States with ``(x + y)(u + v) == 0`` are already fixed, as is everything
    when ``a = b = 0``; both are returned unchanged.  Otherwise the limit is
    ``(A(x,u) alpha, A(y,v) alpha, A(x,u) (1-alpha), A(y,v) (1-alpha))``.
    In floating mode the first test uses ``eps_membership`` as slack.
    """
    if tol is None:
        tol = Tolerance.for_values(*s, p.a, p.b)
    alpha = s.x + s.y
    beta = s.u + s.v
    if p.trivial or alpha * beta <= tol.eps_membership:
        return s
    ax = limit_weight(s.x, s.u, s, p)
    ay = limit_weight(s.y, s.v, s, p)
    return GameteState(ax * alpha, ay * alpha, ax * beta, ay * beta)
