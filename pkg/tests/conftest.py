import random
from fractions import Fraction

import pytest
from hypothesis import settings

from superint import catalog as cat
from superint.exact_algebra import LaurentPoly
from superint.killing import compatible_killing
from superint.potential_solver import solve_potentials

# property suites run on a fixed seed so reruns are reproducible
settings.register_profile("seeded", derandomize=True, deadline=None)
settings.load_profile("seeded")

ACCEPTANCE_LINES = {}

_cache = {}


def compat_for(name):
    """Potential family and compatible system per catalog name, computed once per session."""
    if name not in _cache:
        hf = cat.catalog(name)
        fam = solve_potentials(hf)
        _cache[name] = (hf, fam, compatible_killing(hf, fam))
    return _cache[name]


@pytest.fixture(scope="session")
def systems():
    return compat_for


def random_laurent(rng: random.Random, n: int, nterms: int = 3, lo: int = -2, hi: int = 3) -> LaurentPoly:
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(lo, hi) for _ in range(n))
        terms[e] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return LaurentPoly(n, terms)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
