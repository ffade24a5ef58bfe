"""Schröder and Koenigs functions of a rational map fixed at 0.

For ``R(0) = 0`` with multiplier ``q = R'(0)`` not a root of unity, the
Poincaré function ``sigma = t + ...`` solves ``R(sigma(t)) = sigma(q t)`` and
its compositional inverse ``tau`` solves ``tau(R(x)) = q tau(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .errors import KoenigsError
from .exact import Polynomial, RationalFunction, ratfun_normalize
from .series import (
    TruncatedSeries,
    compose_ratfun,
    ratfun_at_series,
    series_compose,
    series_reversion,
)


@dataclass(frozen=True)
class ValidatedMap:
    R: RationalFunction
    q: Fraction
    degree_info: tuple[int, int]
    is_homography: bool

    @property
    def expanding(self) -> bool:
        """``|q| > 1``; recorded as metadata only."""
        return abs(self.q) > 1


@dataclass(frozen=True)
class Residual:
    """Outcome of an exact residual check.

    ``order`` is the guaranteed order up to which the residual was examined;
    ``first_nonzero`` is the exponent of its first nonzero coefficient, or
    ``None`` when it vanishes to that order.
    """

    name: str
    order: int
    first_nonzero: int | None = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.first_nonzero is None and not self.note

    @classmethod
    def of(cls, name: str, series: TruncatedSeries) -> "Residual":
        return cls(name, series.order, series.first_nonzero())


@dataclass(frozen=True)
class SchroderPair:
    map: ValidatedMap
    sigma: TruncatedSeries
    tau: TruncatedSeries
    order: int
    residuals: tuple[Residual, ...] = field(default=(), compare=False)


def validate_map(R: RationalFunction) -> ValidatedMap:
    if R.is_zero():
        raise KoenigsError("fixed point condition fails: R is zero")
    if R.den(Fraction(0)) == 0 or R.num(Fraction(0)) != 0:
        raise KoenigsError("fixed point condition fails: R(0) != 0")
    q = R.derivative()(Fraction(0))
    if q in (0, 1, -1):
        raise KoenigsError(f"multiplier not admissible: q = R'(0) = {q}")
    degs = (R.num.degree, R.den.degree)
    return ValidatedMap(R, q, degs, degs[0] <= 1 and degs[1] <= 1)


def _as_map(m) -> ValidatedMap:
    return m if isinstance(m, ValidatedMap) else validate_map(m)


def solve_schroder(vmap: ValidatedMap, order: int, method: str = "recursive") -> TruncatedSeries:
    """The unique ``sigma = t + O(t^2)`` with ``R(sigma(t)) = sigma(q t)`` mod ``t^order``.

    ``method="recursive"`` runs the coefficient recursion on
    ``P(sigma) = sigma(q t) Q(sigma)`` with the power tables of ``sigma``
    maintained online.  ``method="residual"`` instead reads every new
    coefficient off the full series residual of the current truncation; it
    is much slower and exists as an independent cross-check.
    """
    vmap = _as_map(vmap)
    if order < 2:
        raise KoenigsError("solve_schroder needs order >= 2")
    if method == "recursive":
        coeffs = _schroder_recursive(vmap, order)
    elif method == "residual":
        coeffs = _schroder_residual(vmap, order)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TruncatedSeries(coeffs, 0, order)


def _pivot(vmap: ValidatedMap, n: int) -> Fraction:
    # coefficient of sigma_n in P(sigma) - sigma(qt) Q(sigma) at t^n
    q0 = vmap.R.den.coeffs[0]
    p = q0 * (vmap.q - vmap.q ** n)
    if p == 0:
        raise KoenigsError(f"vanishing pivot at n={n}")
    return p


def _schroder_recursive(vmap: ValidatedMap, N: int) -> list[Fraction]:
    P = [mpq(c.numerator, c.denominator) for c in vmap.R.num.coeffs]
    Qc = [mpq(c.numerator, c.denominator) for c in vmap.R.den.coeffs]
    q = mpq(vmap.q.numerator, vmap.q.denominator)
    D = max(len(P), len(Qc)) - 1
    zero = mpq(0)
    sigma = [zero, mpq(1)]
    # pw[k][m] = [t^m] sigma^k
    pw = [[mpq(1)] + [zero] * (N - 1)] + [[zero] * N for _ in range(D)]
    if D >= 1:
        pw[1][1] = mpq(1)
    for k in range(2, D + 1):
        pw[k][k] = mpq(1)  # sigma^k = t^k + ...
    qs = [sum((Qc[k] * pw[k][m] for k in range(len(Qc))), zero) for m in range(2)]
    qpow = [mpq(1), q]
    for n in range(2, N):
        qpow.append(qpow[-1] * q)
        for k in range(2, D + 1):
            if n > k:
                pw[k][n] = sum((sigma[i] * pw[k - 1][n - i] for i in range(1, n - k + 2)), zero)
        lhs = sum((P[k] * pw[k][n] for k in range(2, len(P))), zero)
        rhs = sum((qpow[i] * sigma[i] * qs[n - i] for i in range(1, n)), zero)
        piv = Qc[0] * (q - qpow[n])
        s_n = (rhs - lhs) / piv
        sigma.append(s_n)
        pw[1][n] = s_n
        qs.append(sum((Qc[k] * pw[k][n] for k in range(len(Qc))), zero))
    return [Fraction(int(c.numerator), int(c.denominator)) for c in sigma[:N]]


def _schroder_residual(vmap: ValidatedMap, N: int) -> list[Fraction]:
    coeffs = [Fraction(0), Fraction(1)]
    for n in range(2, N):
        s = TruncatedSeries(coeffs, 0, n + 1)
        res = schroder_residual_series(vmap, s)
        coeffs.append(-res[n] / _pivot(vmap, n))
    return coeffs


def schroder_residual_series(vmap: ValidatedMap, sigma: TruncatedSeries) -> TruncatedSeries:
    """``P(sigma) - sigma(q t) Q(sigma)``; zero iff ``R(sigma(t)) = sigma(q t)``."""
    num = ratfun_at_series(RationalFunction.from_poly(vmap.R.num), sigma)
    den = ratfun_at_series(RationalFunction.from_poly(vmap.R.den), sigma)
    return num - sigma.dilate(vmap.q) * den


def schroder_residual(vmap: ValidatedMap, sigma: TruncatedSeries) -> Residual:
    """``R(sigma(t)) - sigma(q t)`` as an exact series."""
    res = ratfun_at_series(vmap.R, sigma) - sigma.dilate(vmap.q)
    return Residual.of("schroder", res)


def koenigs_residual(vmap: ValidatedMap, tau: TruncatedSeries) -> Residual:
    """``tau(R(x)) - q tau(x)``."""
    res = compose_ratfun(tau, vmap.R) - tau.scale(vmap.q)
    return Residual.of("koenigs", res)


def solve_koenigs(vmap: ValidatedMap, order: int) -> SchroderPair:
    vmap = _as_map(vmap)
    sigma = solve_schroder(vmap, order)
    tau = series_reversion(sigma)
    checks = (
        schroder_residual(vmap, sigma),
        koenigs_residual(vmap, tau),
        Residual.of("tau∘sigma", series_compose(tau, sigma) - TruncatedSeries.x(order)),
    )
    for r in checks:
        if not r.ok or r.order < order:
            raise KoenigsError(f"{r.name} residual check failed: {r}")
    return SchroderPair(vmap, sigma, tau, order, checks)


def homography_closed_form(vmap: ValidatedMap) -> RationalFunction:
    """Rational sigma of a homography ``R = q z / (a z + 1)``.

    It is ``(q - 1) t / (a t + q - 1)``.
    """
    vmap = _as_map(vmap)
    if not vmap.is_homography:
        raise KoenigsError("closed form exists only for homographies")
    R = vmap.R
    # R(0) = 0 and the normalized denominator is monic; rescale to den(0) = 1
    d0 = R.den.coeffs[0]
    a = R.den.coeffs[1] / d0 if R.den.degree == 1 else Fraction(0)
    q = vmap.q
    return ratfun_normalize(Polynomial((0, q - 1)), Polynomial((q - 1, a)))


@dataclass(frozen=True)
class ConstantsTrace:
    """Forcing factors ``q**n - 1`` and the coefficientwise solution of ``f(R) = f``."""

    q: Fraction
    factors: tuple[tuple[int, Fraction], ...]
    solution: TruncatedSeries

    @property
    def ok(self) -> bool:
        return all(f != 0 for _, f in self.factors) and self.solution.is_zero()


def constants_check(vmap: ValidatedMap, order: int) -> ConstantsTrace:
    """Solve ``f(R(x)) = f(x)``, ``f(0) = 0`` coefficient by coefficient.

    At ``x^n`` the unknown ``f_n`` appears with factor ``q**n - 1`` and the
    remaining terms involve only ``f_1 .. f_{n-1}``; nonzero factors force
    every coefficient to vanish.
    """
    vmap = _as_map(vmap)
    if order < 2:
        raise KoenigsError("constants_check needs order >= 2")
    Rs = compose_ratfun(TruncatedSeries.x(order), vmap.R)
    powers = [TruncatedSeries.one(order)]
    factors = []
    f = [Fraction(0)]
    for n in range(1, order):
        powers.append(powers[-1] * Rs)
        factor = vmap.q ** n - 1
        factors.append((n, factor))
        if factor == 0:
            raise KoenigsError(f"forcing factor vanishes at n={n}")
        known = sum((f[k] * powers[k][n] for k in range(1, n)), Fraction(0))
        f.append(-known / factor)
    return ConstantsTrace(vmap.q, tuple(factors), TruncatedSeries(f, 0, order))
