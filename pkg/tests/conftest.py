from fractions import Fraction

import pytest

from koenigs.exact import Polynomial, RationalFunction
from koenigs.parser import parse_expression
from koenigs.poincare import solve_koenigs, validate_map

MAPS = {
    "exp": "z^2+2*z",
    "sin2": "4*z-4*z^2",
    "cheb3": "z^3-6*z^2+9*z",
    "homog": "2*z/(3*z+1)",
    "generic": "z^2+3*z",
}


def rf(src: str) -> RationalFunction:
    return parse_expression(src)


def poly(*coeffs) -> Polynomial:
    return Polynomial(tuple(Fraction(c) for c in coeffs))


@pytest.fixture(scope="session")
def pair_cache():
    cache = {}

    def get(name: str, order: int):
        key = (name, order)
        if key not in cache:
            cache[key] = solve_koenigs(validate_map(rf(MAPS.get(name, name))), order)
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
