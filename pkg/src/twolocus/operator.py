"""The one-generation recombination map and its linearization.

Two algebraically equivalent forms are provided.  :func:`step_additive`
adds ``(+aD, -aD, -bD, +bD)`` to the state and is the production path.
:func:`step_qso` evaluates the homogeneous quadratic form obtained by
multiplying the linear terms by ``x + y + u + v = 1``; it exists so the two
can be checked against each other.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from .errors import NotAFixedPoint, SpectrumMismatch
from .scalars import Scalar, Tolerance
from .state import GameteState, RecombinationParams, is_fixed_point, linkage_disequilibrium

Matrix4 = List[List[Scalar]]

SPECTRUM_TOL = 1e-9


def step_additive(s: GameteState, p: RecombinationParams) -> GameteState:
    d = s.y * s.u - s.x * s.v
    ad = p.a * d
    bd = p.b * d
    return GameteState(s.x + ad, s.y - ad, s.u - bd, s.v + bd)


def step_qso(s: GameteState, p: RecombinationParams) -> GameteState:
    """Quadratic stochastic form of the map; equals :func:`step_additive` on the simplex."""
    x, y, u, v = s.x, s.y, s.u, s.v
    a, b = p.a, p.b
    return GameteState(
        x * x + x * y + x * u + (1 - a) * x * v + a * y * u,
        x * y + y * y + (1 - a) * y * u + a * x * v + y * v,
        x * u + (1 - b) * y * u + u * u + b * x * v + u * v,
        (1 - b) * x * v + y * v + b * y * u + u * v + v * v,
    )


def qso_monomials(p: RecombinationParams) -> dict:
    """Coefficient of each monomial ``x_i x_j`` (``i <= j``) in each output coordinate.

    Keys are ``(i, j)`` with indices 0..3 for x, y, u, v; values are
    4-lists over the output coordinate.
    """
    a, b = p.a, p.b
    one, zero = a * 0 + 1, a * 0
    table = {(i, j): [zero] * 4 for i in range(4) for j in range(i, 4)}
    X, Y, U, V = range(4)
    rows = {
        X: {(X, X): one, (X, Y): one, (X, U): one, (X, V): 1 - a, (Y, U): a},
        Y: {(X, Y): one, (Y, Y): one, (Y, U): 1 - a, (X, V): a, (Y, V): one},
        U: {(X, U): one, (Y, U): 1 - b, (U, U): one, (X, V): b, (U, V): one},
        V: {(X, V): 1 - b, (Y, V): one, (Y, U): b, (U, V): one, (V, V): one},
    }
    for k, terms in rows.items():
        for ij, coeff in terms.items():
            table[ij][k] = coeff
    return table


def qso_tensor(p: RecombinationParams) -> list:
    """Symmetric coefficient tensor ``P[i][j][k]`` with ``x'_k = sum_ij P[i][j][k] x_i x_j``.

    Off-diagonal monomial coefficients are split evenly between ``(i, j)``
    and ``(j, i)``.
    """
    half = (p.a * 0 + 1) / 2
    tensor = [[None] * 4 for _ in range(4)]
    for (i, j), coeffs in qso_monomials(p).items():
        if i == j:
            tensor[i][i] = list(coeffs)
        else:
            split = [c * half for c in coeffs]
            tensor[i][j] = split
            tensor[j][i] = list(split)
    return tensor


def apply_qso_tensor(tensor: list, s: GameteState) -> GameteState:
    coords = s.as_tuple()
    out = []
    for k in range(4):
        out.append(sum(tensor[i][j][k] * coords[i] * coords[j] for i in range(4) for j in range(4)))
    return GameteState(*out)


def jacobian(s: GameteState, p: RecombinationParams) -> Matrix4:
    """Exact derivative of :func:`step_additive` with respect to ``(x, y, u, v)``.

    It is ``I + g gradD^T`` with ``g = (a, -a, -b, b)`` and
    ``gradD = (-v, u, y, -x)``.
    """
    g = (p.a, -p.a, -p.b, p.b)
    grad = (-s.v, s.u, s.y, -s.x)
    one, zero = s.x * 0 + 1, s.x * 0
    return [
        [(one if i == j else zero) + g[i] * grad[j] for j in range(4)]
        for i in range(4)
    ]


def numeric_eigenvalues(matrix: Matrix4) -> np.ndarray:
    """Eigenvalues of a 4x4 matrix in float64, sorted by real part."""
    values = np.linalg.eigvals(np.array(matrix, dtype=float))
    return np.sort_complex(values)


def fixed_point_spectrum(
    s: GameteState, p: RecombinationParams, tol: Optional[Tolerance] = None
) -> List[Scalar]:
    """Jacobian eigenvalues at a fixed point: ``[1, 1, 1, 1 - a(u+v) - b(x+y)]``.

    The triple eigenvalue 1 makes every fixed point non-hyperbolic.  The
    closed form is checked against :func:`numeric_eigenvalues` before it is
    returned.

    Raises:
        NotAFixedPoint: ``s`` is not in the fixed-point set for ``p``.
        SpectrumMismatch: the numeric eigensolve disagrees by more than 1e-9.
    """
    if not is_fixed_point(s, p, tol):
        raise NotAFixedPoint(f"D={linkage_disequilibrium(s)} at {s}")
    one = s.x * 0 + 1
    last = one - p.a * (s.u + s.v) - p.b * (s.x + s.y)
    closed = [one, one, one, last]

    numeric = numeric_eigenvalues(jacobian(s, p))
    expected = np.sort_complex(np.array([float(c) for c in closed], dtype=complex))
    if np.max(np.abs(numeric - expected)) > SPECTRUM_TOL:
        raise SpectrumMismatch(f"closed form {expected} vs numeric {numeric}")
    return closed
