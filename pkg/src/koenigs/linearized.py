"""Partial Bell polynomials and the Faà di Bruno linearization of Koenigs' equation.

Differentiating ``tau(R(x)) = q tau(x)`` n times and eliminating the lower
derivatives gives

    tau^(n)(R(x)) = q / R'(x)**n * tau^(n)(x) + sum_{k<n} A_{n,k}(x) tau^(k)(x)

with rational ``A_{n,k}``; :func:`linearize_row` computes these exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import InsufficientOrderError, KoenigsError
from .exact import RationalFunction, ord_at_zero
from .poincare import Residual, SchroderPair, ValidatedMap, _as_map
from .series import TruncatedSeries, compose_ratfun, expand_ratfun, series_compose

MIN_CHECKED = 10


@dataclass(frozen=True)
class BellPolynomial:
    """``B_{n,k}`` as a map from exponent vectors over ``x_1..x_{n-k+1}`` to coefficients."""

    n: int
    k: int
    terms: dict

    def evaluate(self, args, one=1):
        """Evaluate at ``args[0] = x_1, args[1] = x_2, ...`` in any commutative ring."""
        total = None
        for exps, c in sorted(self.terms.items()):
            term = None
            for i, e in enumerate(exps):
                if e:
                    p = args[i] ** e
                    term = p if term is None else term * p
            term = one if term is None else term
            term = term * c
            total = term if total is None else total + term
        return total if total is not None else one * 0

    def __str__(self) -> str:
        parts = []
        for exps, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


@lru_cache(maxsize=None)
def _bell_terms(n: int, k: int) -> tuple:
    # B_{n,k} = sum_{i=1}^{n-k+1} C(n-1, i-1) x_i B_{n-i,k-1}; exponents padded to length n
    if n == 0 and k == 0:
        return ((tuple(), 1),)
    if n == 0 or k == 0:
        return ()
    acc: dict[tuple, int] = {}
    for i in range(1, n - k + 2):
        for exps, c in _bell_terms(n - i, k - 1):
            e = list(exps) + [0] * (n - len(exps))
            e[i - 1] += 1
            key = tuple(e)
            acc[key] = acc.get(key, 0) + comb(n - 1, i - 1) * c
    return tuple(sorted(acc.items()))


def bell(n: int, k: int) -> BellPolynomial:
    if not 1 <= k <= n:
        raise KoenigsError(f"Bell polynomial B_{{{n},{k}}} needs 1 <= k <= n")
    width = n - k + 1
    terms = {}
    for exps, c in _bell_terms(n, k):
        terms[tuple((list(exps) + [0] * width)[:width])] = c
    return BellPolynomial(n, k, terms)


def _derivatives(s: TruncatedSeries, upto: int) -> list[TruncatedSeries]:
    out = [s]
    for _ in range(upto):
        out.append(out[-1].derive())
    return out


def faa_di_bruno_apply(f: TruncatedSeries, g: TruncatedSeries, n: int) -> TruncatedSeries:
    """n-th derivative of ``f(g(x))`` as ``sum_k B_{n,k}(g', .., g^(n-k+1)) f^(k)(g)``."""
    if n < 1:
        raise KoenigsError("faa_di_bruno_apply needs n >= 1")
    fd = _derivatives(f, n)
    gd = _derivatives(g, n)
    total = None
    for k in range(1, n + 1):
        coef = bell(n, k).evaluate(gd[1:], TruncatedSeries.one(gd[1].order))
        term = coef * series_compose(fd[k], g)
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class LinearizedRow:
    """``Phi_R(y_n) = diagonal * y_n + sum_k lower[k-1] * y_k``."""

    n: int
    diagonal: RationalFunction
    lower: tuple[RationalFunction, ...]


@lru_cache(maxsize=64)
def _rows(vmap: ValidatedMap, n: int) -> tuple[LinearizedRow, ...]:
    R = vmap.R
    derivs = [R]
    for _ in range(n):
        derivs.append(derivs[-1].derivative())
    r1 = derivs[1]
    # coefficient matrix of Phi_R(y_k) in y_1..y_k, row by row
    mats: list[list[RationalFunction]] = []
    rows = []
    for m in range(1, n + 1):
        inv = r1 ** (-m)
        row = []
        for i in range(1, m):
            acc = RationalFunction.from_poly(0)
            for k in range(i, m):
                b = bell(m, k).evaluate(derivs[1:m - k + 2], RationalFunction.from_poly(1))
                acc = acc + b * mats[k - 1][i - 1]
            row.append(-(inv * acc))
        diag = inv * vmap.q
        row.append(diag)
        mats.append(row)
        rows.append(LinearizedRow(m, diag, tuple(row[:-1])))
    return tuple(rows)


def linearize_row(vmap: ValidatedMap, n: int) -> LinearizedRow:
    vmap = _as_map(vmap)
    if n < 1:
        raise KoenigsError("linearize_row needs n >= 1")
    return _rows(vmap, n)[-1]


def _times(F: RationalFunction, s: TruncatedSeries) -> TruncatedSeries:
    if F.is_zero():
        return TruncatedSeries.zero(s.order)
    return expand_ratfun(F, s.precision + ord_at_zero(F)) * s


def verify_row(row: LinearizedRow, pair: SchroderPair) -> Residual:
    """Residual of the row identity at ``y_k = tau^(k)``."""
    n = row.n
    if pair.order - n < MIN_CHECKED:
        raise InsufficientOrderError(n + MIN_CHECKED, pair.order, f"verify_row(n={n})")
    td = _derivatives(pair.tau, n)
    res = compose_ratfun(td[n], pair.map.R) - _times(row.diagonal, td[n])
    for k, A in enumerate(row.lower, start=1):
        if not A.is_zero():
            res = res - _times(A, td[k])
    return Residual.of(f"row {n}", res)


@dataclass(frozen=True)
class OmegaShift:
    n: int
    omega: TruncatedSeries
    rhs: TruncatedSeries
    residual: Residual


def omega_shift(pair: SchroderPair, n: int) -> OmegaShift:
    """``omega_n = tau^(n) / z`` with ``z = (tau')^n tau^(1-n)`` and its additive shift.

    Checks ``omega_n(R(x)) = omega_n(x) + b (R')^n / (q z)`` where
    ``b = sum_{k<n} A_{n,k} tau^(k)``.
    """
    if n < 2:
        raise KoenigsError("omega_shift needs n >= 2")
    if pair.order - n < MIN_CHECKED:
        raise InsufficientOrderError(n + MIN_CHECKED, pair.order, f"omega_shift(n={n})")
    vmap = pair.map
    row = linearize_row(vmap, n)
    td = _derivatives(pair.tau, n)
    z = td[1] ** n * pair.tau ** (1 - n)
    omega = td[n] * z.invert()
    b = TruncatedSeries.zero(td[n].order)
    for k, A in enumerate(row.lower, start=1):
        if not A.is_zero():
            b = b + _times(A, td[k])
    scale = vmap.R.derivative() ** n / vmap.q
    rhs = _times(scale, b) * z.invert()
    res = compose_ratfun(omega, vmap.R) - omega - rhs
    return OmegaShift(n, omega, rhs, Residual.of(f"omega {n}", res))
