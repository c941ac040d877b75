import numpy as np
import pytest
from hypothesis import strategies as st

from bergszego.core import MonomialTerm, MultiIndex, PolyObservable, RationalComplex


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_disc_points(rng, count, rmax):
    r = rmax * np.sqrt(rng.uniform(0, 1, count))
    t = rng.uniform(0, 2 * np.pi, count)
    return [complex(v) for v in r * np.exp(1j * t)]


def random_ball_points(rng, count, rmax):
    out = []
    for _ in range(count):
        v = rng.normal(size=4)
        v /= np.linalg.norm(v)
        rho = rmax * rng.uniform(0, 1) ** 0.25
        out.append((complex(v[0], v[1]) * rho, complex(v[2], v[3]) * rho))
    return out


fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
rationals = st.builds(RationalComplex, fractions, fractions)


@st.composite
def polys(draw, n=1, max_terms=4, max_deg=4):
    count = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(count):
        holo = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        anti = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        terms.append(MonomialTerm(draw(rationals), MultiIndex(holo), MultiIndex(anti)))
    return PolyObservable(n, tuple(terms))


# one line per acceptance criterion, echoed again in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
