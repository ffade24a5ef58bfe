import math
from fractions import Fraction

import pytest
import sympy

from koenigs.errors import KoenigsError
from koenigs.series import TruncatedSeries, compose_ratfun, expand_ratfun
from koenigs.poincare import (
    constants_check,
    homography_closed_form,
    koenigs_residual,
    schroder_residual,
    solve_koenigs,
    solve_schroder,
    validate_map,
)

from conftest import MAPS, rf

N = 41


def sigma_exp(n):
    return Fraction(1, math.factorial(n))


def sigma_sin2(n):
    return Fraction((-1) ** (n + 1) * 2 ** (2 * n - 1), math.factorial(2 * n))


def sigma_cheb3(n):
    return Fraction(2 * (-1) ** (n + 1), math.factorial(2 * n))


def tau_sin2(n):
    return Fraction(4 ** n, 2 * n * n * math.comb(2 * n, n))


def tau_cheb3(n):
    return Fraction(2, n * n * math.comb(2 * n, n))


def sympy_coeffs(expr, var, n):
    ser = sympy.series(expr, var, 0, n).removeO()
    return [Fraction(str(ser.coeff(var, k))) for k in range(1, n)]


# -- validation -------------------------------------------------------------

def test_validate_examples():
    m = validate_map(rf("z^2+2*z"))
    assert m.q == 2 and not m.is_homography and m.expanding
    h = validate_map(rf("2*z/(3*z+1)"))
    assert h.q == 2 and h.is_homography
    assert validate_map(rf("z/2+z^2")).expanding is False


@pytest.mark.parametrize("src, msg", [
    ("z^2", "multiplier not admissible"),
    ("z+z^2", "multiplier not admissible"),
    ("-z+z^2", "multiplier not admissible"),
    ("z^2+2*z+1", "fixed point condition fails"),
    ("2*z/z", "fixed point condition fails"),
    ("0", "fixed point condition fails"),
])
def test_validate_rejects(src, msg):
    with pytest.raises(KoenigsError, match=msg):
        validate_map(rf(src))


# -- sigma --------------------------------------------------------------------

@pytest.mark.parametrize("name, oracle", [
    ("exp", sigma_exp), ("sin2", sigma_sin2), ("cheb3", sigma_cheb3),
])
def test_sigma_closed_forms(pair_cache, name, oracle):
    sigma = pair_cache(name, N).sigma
    assert sigma.valuation == 1
    assert sigma.coeffs == tuple(oracle(n) for n in range(1, N))


def test_sigma_sympy_cross_check():
    t = sympy.symbols("t")
    got = solve_schroder(validate_map(rf(MAPS["sin2"])), 12).coeffs
    assert list(got) == sympy_coeffs(sympy.sin(sympy.sqrt(t)) ** 2, t, 12)
    got = solve_schroder(validate_map(rf(MAPS["cheb3"])), 12).coeffs
    assert list(got) == sympy_coeffs(2 - 2 * sympy.cos(sympy.sqrt(t)), t, 12)


@pytest.mark.parametrize("name", sorted(MAPS))
def test_methods_agree(name):
    m = validate_map(rf(MAPS[name]))
    assert solve_schroder(m, 18) == solve_schroder(m, 18, method="residual")


def test_solve_schroder_order_check():
    with pytest.raises(KoenigsError):
        solve_schroder(validate_map(rf("z^2+2*z")), 1)


def test_negative_and_fractional_multipliers():
    for src in ("z^2-2*z", "z/2+z^2", "-3*z/(z+1)", "(z^2+5*z)/(1-z)"):
        m = validate_map(rf(src))
        sigma = solve_schroder(m, 30)
        assert schroder_residual(m, sigma).ok
        assert schroder_residual(m, sigma).order == 30


# -- tau ----------------------------------------------------------------------

def test_tau_log(pair_cache):
    tau = pair_cache("exp", N).tau
    assert tau.coeffs == tuple(Fraction((-1) ** (n + 1), n) for n in range(1, N))


@pytest.mark.parametrize("name, oracle", [("sin2", tau_sin2), ("cheb3", tau_cheb3)])
def test_tau_closed_forms(pair_cache, name, oracle):
    tau = pair_cache(name, N).tau
    assert tau.coeffs == tuple(oracle(n) for n in range(1, N))


def test_pair_residuals(pair_cache):
    for name in MAPS:
        pair = pair_cache(name, N)
        assert [r.name for r in pair.residuals][-1] == "tau∘sigma"
        assert all(r.ok and r.order == N for r in pair.residuals)
        assert koenigs_residual(pair.map, pair.tau).ok


def test_derivative_identity(pair_cache):
    for name in MAPS:
        pair = pair_cache(name, N)
        R = pair.map.R
        d = pair.tau.derive()
        lhs = compose_ratfun(d, R) * expand_ratfun(R.derivative(), d.order)
        assert lhs == d.scale(pair.map.q)


def test_perturbed_sigma_has_nonzero_residual(pair_cache):
    pair = pair_cache("exp", N)
    bumped = pair.sigma + TruncatedSeries([Fraction(1, 10 ** 6)], 7, N)
    res = schroder_residual(pair.map, bumped)
    assert not res.ok and res.first_nonzero == 7


# -- homographies -------------------------------------------------------------

@pytest.mark.parametrize("src, expected", [
    ("2*z/(z+1)", "t/(t+1)"),
    ("3*z", "t"),
    ("3*z/(2*z+1)", "t/(t+1)"),
    ("2*z/(3*z+1)", "t/(3*t+1)"),
])
def test_homography_closed_form(src, expected):
    got = homography_closed_form(validate_map(rf(src)))
    assert got == rf(expected.replace("t", "z"))
    assert got.to_str("t").replace(" ", "") == expected or got == rf(expected.replace("t", "z"))


@pytest.mark.parametrize("q, a", [(2, 1), (3, 2), (-2, 5), (Fraction(1, 2), -3), (2, 3)])
def test_homography_series_and_inverse(q, a):
    R = rf(f"({q.numerator if isinstance(q, Fraction) else q})*z/"
           f"(({q.denominator if isinstance(q, Fraction) else 1})*({a}*z+1))")
    m = validate_map(R)
    pair = solve_koenigs(m, 25)
    closed = homography_closed_form(m)
    assert pair.sigma == expand_ratfun(closed, 25)
    q, a = Fraction(q), Fraction(a)
    inverse = rf("z") * (q - 1) / (rf("z") * -a + (q - 1))
    assert pair.tau == expand_ratfun(inverse, 25)


def test_homography_closed_form_rejects_nonhomography():
    with pytest.raises(KoenigsError):
        homography_closed_form(validate_map(rf("z^2+2*z")))


# -- constants ----------------------------------------------------------------

def test_constants_examples():
    tr = constants_check(validate_map(rf("z^2+2*z")), 10)
    assert tr.factors == tuple((n, Fraction(2 ** n - 1)) for n in range(1, 10))
    assert tr.ok and tr.solution.is_zero() and tr.solution.order == 10
    tr = constants_check(validate_map(rf("z^2-2*z")), 6)
    assert [f for _, f in tr.factors] == [(-2) ** n - 1 for n in range(1, 6)]
    assert all(f != 0 for _, f in tr.factors)


def test_constants_first_factor_is_q_minus_one():
    for name in MAPS:
        m = validate_map(rf(MAPS[name]))
        assert constants_check(m, 3).factors[0] == (1, m.q - 1)
