"""Orbit computation, convergence detection and cross-checks against the closed forms."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Tuple

from .errors import MaxStepsExceeded, RateUndefined
from .operator import step_additive
from .scalars import (
    FLOAT_EPS_CONVERGENCE,
    NOISE_FLOOR,
    RATIONAL_EPS_CONVERGENCE,
    Scalar,
    Tolerance,
    is_exact,
)
from .slices import eigenvalues, predicted_limit
from .state import (
    GameteState,
    RecombinationParams,
    alpha_of,
    is_fixed_point,
    linkage_disequilibrium,
    max_norm,
)

DEFAULT_MAX_STEPS = 10_000
TRANSIENT_STEPS = 3
RATE_WINDOW = 100


@dataclass(frozen=True)
class StopCriterion:
    eps: Scalar = FLOAT_EPS_CONVERGENCE
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")

    @classmethod
    def rational(cls, max_steps: int = 200) -> "StopCriterion":
        return cls(RATIONAL_EPS_CONVERGENCE, max_steps)


@dataclass(frozen=True)
class Trajectory:
    """Recorded orbit.  With ``stride > 1`` only every ``stride``-th state is kept."""

    params: RecombinationParams
    states: Tuple[GameteState, ...]
    d_values: Tuple[Scalar, ...]
    steps: Tuple[int, ...]
    stride: int = 1

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class ConvergenceReport:
    final_state: GameteState
    steps_taken: int
    oracle_state: GameteState
    oracle_gap: Scalar
    estimated_rate: Optional[float]
    theoretical_rate: Scalar
    converged: bool
    trajectory: Trajectory = field(repr=False)


@dataclass(frozen=True)
class VerificationReport:
    checks: Dict[str, bool]
    report: ConvergenceReport

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _build(p: RecombinationParams, states: List[GameteState], steps: List[int], stride: int) -> Trajectory:
    d_values = tuple(linkage_disequilibrium(s) for s in states)
    return Trajectory(p, tuple(states), d_values, tuple(steps), stride)


def iterate(s: GameteState, p: RecombinationParams, n: int, stride: int = 1) -> Trajectory:
    """Orbit ``s, W(s), ..., W^n(s)``.

    With ``stride > 1`` only every ``stride``-th state is stored, plus the
    final one.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if stride < 1:
        raise ValueError("stride must be at least 1")
    states, steps = [s], [0]
    current = s
    for k in range(1, n + 1):
        current = step_additive(current, p)
        if k % stride == 0 or k == n:
            states.append(current)
            steps.append(k)
    return _build(p, states, steps, stride)


def _successive_diffs(t: Trajectory) -> List[Scalar]:
    return [max_norm(t.states[k + 1], t.states[k]) for k in range(len(t.states) - 1)]


def estimate_rate(t: Trajectory) -> float:
    """Contraction factor per step, from the geometric mean of successive-difference ratios.

    The first three differences are skipped as transient when enough
    remain, and floating differences under 100 machine epsilons are
    ignored.  An orbit that lands on a fixed point after one step reports 0.

    Raises:
        RateUndefined: the orbit is constant or too short.
    """
    diffs = _successive_diffs(t)
    if t.stride > 1 and len(t.steps) >= 2 and t.steps[-1] - t.steps[-2] != t.stride:
        diffs = diffs[:-1]
    exact = bool(diffs) and all(is_exact(d) for d in diffs)
    floor = 0 if exact else NOISE_FLOOR
    if not any(d > floor for d in diffs):
        raise RateUndefined("orbit has no usable successive differences")
    if len(diffs) >= 2 and diffs[0] > floor and all(d <= floor for d in diffs[1:]):
        return 0.0

    start = TRANSIENT_STEPS if len(diffs) - TRANSIENT_STEPS >= 2 else 0
    usable = []
    for d in diffs[start:]:
        if d <= floor:
            break
        usable.append(d)
    if len(usable) < 2:
        raise RateUndefined("fewer than two usable successive differences")
    ratio = float(usable[-1] / usable[0])
    per_window = ratio ** (1.0 / (len(usable) - 1))
    return per_window ** (1.0 / t.stride)


def _tail_bound(history: Deque[Scalar], exact: bool) -> Optional[Scalar]:
    """Bound on the distance left to the limit, assuming geometric decay.

    The decay ratio ``r`` comes from the last two differences in exact
    mode.  In floating mode it is the geometric mean over the whole
    ``history`` window, since a one-step ratio of tiny differences is
    dominated by rounding once ``1 - r`` is small.
    """
    if len(history) < 2 or history[0] == 0:
        return None
    diff = history[-1]
    if exact:
        r = diff / history[-2]
    else:
        r = (diff / history[0]) ** (1.0 / (len(history) - 1))
    if r >= 1:
        return None
    return max(diff, diff * r / (1 - r))


def run_to_convergence(
    s: GameteState,
    p: RecombinationParams,
    crit: Optional[StopCriterion] = None,
    stride: int = 1,
    tol: Optional[Tolerance] = None,
) -> ConvergenceReport:
    """Iterate until the orbit has settled, then compare with :func:`predicted_limit`.

    The run stops when the successive difference ``delta`` and the
    geometric tail estimate ``delta * r / (1 - r)`` (``r`` the observed
    decay ratio of recent differences) are both at most ``crit.eps``, or
    when a step changes nothing.  Only the orbit itself is consulted, never
    the oracle.

    Raises:
        MaxStepsExceeded: carries the partial report as ``.report``.
    """
    if crit is None:
        crit = StopCriterion.rational() if s.exact and p.exact else StopCriterion()
    if tol is None:
        tol = Tolerance.for_values(*s, p.a, p.b)
    exact = s.exact and p.exact
    theoretical = eigenvalues(alpha_of(s), p).lambda2
    oracle = predicted_limit(s, p, tol)

    if p.trivial:
        return ConvergenceReport(
            s, 0, oracle, max_norm(s, oracle), None, theoretical, True, _build(p, [s], [0], 1)
        )

    states, recorded_steps = [s], [0]
    current = s
    history: Deque[Scalar] = deque(maxlen=RATE_WINDOW + 1)
    converged = False
    steps = 0
    for steps in range(1, crit.max_steps + 1):
        nxt = step_additive(current, p)
        diff = max_norm(nxt, current)
        current = nxt
        if steps % stride == 0:
            states.append(current)
            recorded_steps.append(steps)
        if diff == 0:
            converged = True
            break
        history.append(diff)
        bound = _tail_bound(history, exact)
        if bound is not None and bound <= crit.eps:
            converged = True
            break
        if bound is None and not exact and len(history) > 1 and diff <= NOISE_FLOOR:
            # ratio is rounding noise; the orbit cannot settle any further
            converged = True
            break
    if recorded_steps[-1] != steps:
        states.append(current)
        recorded_steps.append(steps)

    trajectory = _build(p, states, recorded_steps, stride)
    try:
        rate = estimate_rate(trajectory)
    except RateUndefined:
        rate = None
    report = ConvergenceReport(
        final_state=current,
        steps_taken=steps,
        oracle_state=oracle,
        oracle_gap=max_norm(current, oracle),
        estimated_rate=rate,
        theoretical_rate=theoretical,
        converged=converged,
        trajectory=trajectory,
    )
    if not converged:
        raise MaxStepsExceeded(f"no convergence within {crit.max_steps} steps from {s}", report)
    return report


def verify_against_oracle(
    s: GameteState,
    p: RecombinationParams,
    crit: Optional[StopCriterion] = None,
    tol: Optional[Tolerance] = None,
) -> VerificationReport:
    """Run to convergence and check the orbit against the closed forms.

    Checks, keyed in the returned ``checks`` dict:

    ``limit``
        final state within ``crit.eps`` (max-norm) of the predicted limit,
        plus ``eps_membership`` of rounding slack (none in rational mode).
    ``d_decay``
        ``D_k == lambda2**k * D_0`` for every recorded step, to
        ``eps_membership`` (exactly in rational mode).
    ``alpha``
        ``x + y`` unchanged along the orbit, to ``eps_membership``.
    ``fixed``
        the one-step residual ``|W(s) - s|`` of the final state is within
        ``crit.eps``; for ``a = b = 0`` this is automatic.
    """
    if crit is None:
        crit = StopCriterion.rational() if s.exact and p.exact else StopCriterion()
    if tol is None:
        tol = Tolerance.for_values(*s, p.a, p.b)
    report = run_to_convergence(s, p, crit, tol=tol)
    t = report.trajectory
    lam = report.theoretical_rate
    d0 = t.d_values[0]
    eps = tol.eps_membership

    d_ok = all(abs(d - lam**k * d0) <= eps for k, d in zip(t.steps, t.d_values))
    alpha0 = alpha_of(s)
    alpha_ok = all(abs(alpha_of(st) - alpha0) <= eps for st in t.states)

    largest = max(p.a, p.b)
    if largest == 0:
        fixed_ok = True
    else:
        fixed_ok = is_fixed_point(report.final_state, p, Tolerance(crit.eps / largest, crit.eps))

    checks = {
        "limit": report.oracle_gap <= crit.eps + eps,
        "d_decay": d_ok,
        "alpha": alpha_ok,
        "fixed": fixed_ok,
    }
    return VerificationReport(checks, report)
