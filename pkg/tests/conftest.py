import random
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from twolocus import GameteState, RecombinationParams

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

# Acceptance lines collected by tests/test_acceptance.py, printed at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def rational_states(draw, max_denominator=20):
    """Random points of the simplex with small-denominator rational coordinates."""
    den = draw(st.integers(1, max_denominator))
    cuts = sorted(draw(st.lists(st.integers(0, den), min_size=3, max_size=3)))
    parts = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], den - cuts[2]]
    return GameteState(*(Fraction(k, den) for k in parts))


@st.composite
def float_states(draw):
    c = sorted(draw(st.lists(st.floats(0, 1), min_size=3, max_size=3)))
    return GameteState(c[0], c[1] - c[0], c[2] - c[1], 1.0 - c[2])


rational_unit = st.builds(
    lambda n, d: Fraction(min(n, d), d), st.integers(0, 20), st.integers(1, 20)
)
rational_params = st.builds(RecombinationParams, rational_unit, rational_unit)
float_params = st.builds(RecombinationParams, st.floats(0, 1), st.floats(0, 1))


def random_rational_state(rng: random.Random, max_denominator: int = 20) -> GameteState:
    den = rng.randint(1, max_denominator)
    cuts = sorted(rng.randint(0, den) for _ in range(3))
    parts = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], den - cuts[2]]
    return GameteState(*(Fraction(k, den) for k in parts))


def random_rational_params(rng: random.Random, max_denominator: int = 20) -> RecombinationParams:
    def unit():
        d = rng.randint(1, max_denominator)
        return Fraction(rng.randint(0, d), d)

    return RecombinationParams(unit(), unit())


def random_float_state(rng: random.Random, alpha_range=(0.0, 1.0)) -> GameteState:
    """Uniform on the simplex (sorted-uniform spacings), optionally conditioned on alpha."""
    while True:
        c = sorted(rng.random() for _ in range(3))
        x, y, u = c[0], c[1] - c[0], c[2] - c[1]
        v = 1.0 - x - y - u
        if alpha_range[0] <= x + y <= alpha_range[1]:
            return GameteState(x, y, u, v)


@pytest.fixture
def rng():
    return random.Random(20240601)
