import random
from fractions import Fraction

import pytest

from polysym import TruncatedSeries
from polysym.numbers import ComplexRational
from polysym.elementary import ElementarySeries
from polysym.series import compositions


def random_fraction(rng: random.Random, span=5, den=4):
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_poly(rng, dim, degree, cap=None, density=0.4, complex_coeffs=False):
    """Random polynomial of total degree <= degree with small rational coefficients."""
    cap = degree if cap is None else cap
    terms = {}
    for k in range(degree + 1):
        for mono in compositions(k, dim):
            if rng.random() < density:
                re = random_fraction(rng)
                im = random_fraction(rng) if complex_coeffs else 0
                terms[mono] = (re, im)
    return TruncatedSeries(dim, cap, {m: ComplexRational(*c) for m, c in terms.items()})


def random_epoly(rng, dim, max_weight, density=0.5):
    terms = {}
    for m in _weighted_vectors(dim, max_weight):
        if rng.random() < density:
            terms[m] = random_fraction(rng)
    return ElementarySeries(dim, max_weight, terms)


def _weighted_vectors(dim, max_weight):
    out = []

    def rec(j, remaining, acc):
        if j == dim:
            out.append(tuple(acc))
            return
        w = j + 1
        for e in range(remaining // w + 1):
            rec(j + 1, remaining - e * w, acc + [e])

    rec(0, max_weight, [])
    return out


def random_point(rng, dim, radius=1.0):
    import cmath

    return tuple(radius * rng.random() ** 0.5 * cmath.exp(2j * cmath.pi * rng.random()) for _ in range(dim))


@pytest.fixture
def rng():
    return random.Random(20261019)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
