import random
from fractions import Fraction

import pytest

from koenigs.errors import InsufficientOrderError, KoenigsError
from koenigs.linearized import bell, faa_di_bruno_apply, linearize_row, omega_shift, verify_row
from koenigs.poincare import solve_koenigs, validate_map
from koenigs.series import TruncatedSeries, series_compose

from conftest import MAPS, rf

S = TruncatedSeries


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def bell_by_enumeration(n, k):
    """Exponent vector -> count, from the block sizes of every k-block partition."""
    width = n - k + 1
    out = {}
    for part in set_partitions(list(range(n))):
        if len(part) != k:
            continue
        e = [0] * width
        for block in part:
            e[len(block) - 1] += 1
        out[tuple(e)] = out.get(tuple(e), 0) + 1
    return out


@pytest.mark.parametrize("n", range(1, 9))
def test_bell_extremes(n):
    assert bell(n, n).terms == {(n,): 1}
    e = [0] * n
    e[-1] = 1
    assert bell(n, 1).terms == {tuple(e): 1}


def test_bell_4_2():
    b = bell(4, 2)
    assert b.terms == {(0, 2, 0): 3, (1, 0, 1): 4}
    assert b.terms == bell_by_enumeration(4, 2)


@pytest.mark.parametrize("n", range(1, 8))
def test_bell_matches_enumeration(n):
    for k in range(1, n + 1):
        assert bell(n, k).terms == bell_by_enumeration(n, k)


def test_bell_homogeneity_and_numbers():
    totals = []
    for n in range(1, 9):
        for k in range(1, n + 1):
            for exps in bell(n, k).terms:
                assert sum(exps) == k
                assert sum((i + 1) * e for i, e in enumerate(exps)) == n
        totals.append(sum(bell(n, k).evaluate([1] * n) for k in range(1, n + 1)))
    assert totals[:5] == [1, 2, 5, 15, 52]
    assert totals == [1, 2, 5, 15, 52, 203, 877, 4140]


def test_bell_errors():
    with pytest.raises(KoenigsError):
        bell(3, 0)
    with pytest.raises(KoenigsError):
        bell(2, 3)


# -- Faa di Bruno ---------------------------------------------------------------

def iterated(f, g, n):
    h = series_compose(f, g)
    for _ in range(n):
        h = h.derive()
    return h


def test_faa_di_bruno_n2_example():
    f = S([1], 2, 12)
    g = S([1, 1], 1, 12)
    got = faa_di_bruno_apply(f, g, 2)
    assert got.coeffs[:3] == (2, 12, 12)
    assert all(c == 0 for c in got.coeffs[3:])


def test_faa_di_bruno_chain_rule():
    f = S([Fraction(1, k + 1) for k in range(12)])
    g = S([1, 3, -2], 1, 12)
    assert faa_di_bruno_apply(f, g, 1) == series_compose(f.derive(), g) * g.derive()


def random_series(rng, order, valuation):
    cs = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(order - valuation)]
    if valuation == 1 and cs[0] == 0:
        cs[0] = Fraction(1)
    return S(cs, valuation, order)


def test_faa_di_bruno_random():
    rng = random.Random(2024)
    for _ in range(50):
        f = random_series(rng, 14, 0)
        g = random_series(rng, 14, 1)
        for n in range(1, 7):
            got = faa_di_bruno_apply(f, g, n)
            want = iterated(f, g, n)
            m = min(got.order, want.order)
            assert got.truncate(m) == want.truncate(m)


# -- rows -------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(MAPS))
def test_row_one_is_diagonal(name):
    m = validate_map(rf(MAPS[name]))
    row = linearize_row(m, 1)
    assert row.lower == ()
    assert row.diagonal == m.R.derivative() ** -1 * m.q


@pytest.mark.parametrize("name", sorted(MAPS))
def test_row_two_formula(name):
    m = validate_map(rf(MAPS[name]))
    d1 = m.R.derivative()
    d2 = d1.derivative()
    row = linearize_row(m, 2)
    assert row.diagonal == d1 ** -2 * m.q
    assert row.lower == (-(d2 * m.q) * d1 ** -3,)


def test_linear_map_rows():
    m = validate_map(rf("3*z"))
    for n in range(1, 6):
        row = linearize_row(m, n)
        assert row.diagonal == rf("1") * Fraction(3) ** (1 - n)
        assert all(A.is_zero() for A in row.lower)


def test_linearize_row_rejects_zero():
    with pytest.raises(KoenigsError):
        linearize_row(validate_map(rf("z^2+2*z")), 0)


@pytest.mark.parametrize("name", sorted(MAPS))
def test_verify_rows(pair_cache, name):
    pair = pair_cache(name, 45)
    for n in range(1, 6):
        res = verify_row(linearize_row(pair.map, n), pair)
        assert res.ok and res.order >= 30


def test_verify_row_insufficient_order():
    pair = solve_koenigs(validate_map(rf("z^2+2*z")), 12)
    with pytest.raises(InsufficientOrderError) as exc:
        verify_row(linearize_row(pair.map, 4), pair)
    assert exc.value.required == 14


def test_broken_row_is_detected(pair_cache):
    pair = pair_cache("exp", 45)
    row = linearize_row(pair.map, 2)
    bad = type(row)(2, row.diagonal, (row.lower[0] + rf("1"),))
    assert not verify_row(bad, pair).ok


@pytest.mark.parametrize("name", sorted(MAPS))
@pytest.mark.parametrize("n", [2, 3])
def test_omega_shift(pair_cache, name, n):
    sh = omega_shift(pair_cache(name, 45), n)
    assert sh.residual.ok and sh.residual.order >= 25


def test_omega_shift_linear_map():
    pair = solve_koenigs(validate_map(rf("3*z")), 30)
    for n in (2, 3):
        sh = omega_shift(pair, n)
        assert sh.rhs.is_zero() and sh.residual.ok


def test_omega_shift_errors():
    pair = solve_koenigs(validate_map(rf("z^2+2*z")), 12)
    with pytest.raises(KoenigsError):
        omega_shift(pair, 1)
    with pytest.raises(InsufficientOrderError):
        omega_shift(pair, 3)
