"""Bounded search for Ritt type-(A) equations satisfied by the Koenigs function.

The search looks for ``(tau')**r = A(x) * tau**j`` with ``r >= 1`` and
rational ``A``.  For each grid point ``(r, j)`` the series
``S = x**j (tau')**r tau**(-j)`` is a unit power series, and a hit means
``S = p/d`` for polynomials of degree at most ``deg_max``: a Padé-type
linear system over Q.  Every candidate is re-verified at the full order of
the pair before it is reported.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpz

from .errors import InsufficientOrderError, KoenigsError
from .exact import Polynomial, RationalFunction, ord_at_zero, ratfun_normalize
from .linalg import PRIMES, nullspace, rank_mod_p
from .poincare import (
    Residual,
    SchroderPair,
    homography_closed_form,
    solve_koenigs,
)
from .series import TruncatedSeries, expand_ratfun, ratfun_at_series

MIN_CHECKED = 10

HOMOGRAPHY = "homography"
HIT = "hit"
NO_HIT = "no_hit_within_bounds"


@dataclass(frozen=True)
class RittEquationTau:
    """``(tau')**r = A(x) * tau**j``."""

    r: int
    j: int
    A: RationalFunction

    def __post_init__(self):
        if self.r == 0:
            raise KoenigsError("Ritt equation needs r != 0")


@dataclass(frozen=True)
class RittEquationSigma:
    """``(sigma')**r = t**j * A(sigma)``."""

    r: int
    j: int
    A: RationalFunction

    def __post_init__(self):
        if self.r == 0:
            raise KoenigsError("Ritt equation needs r != 0")


@dataclass(frozen=True)
class DetectionBounds:
    r_max: int = 6
    j_max: int = 8
    deg_max: int = 12
    order: int | None = None
    margin: int = 64

    def __post_init__(self):
        if self.order is None:
            object.__setattr__(self, "order", 2 * self.deg_max + self.j_max + self.margin)
        if self.r_max < 1 or self.j_max < 0 or self.deg_max < 0:
            raise KoenigsError("bounds need r_max >= 1, j_max >= 0, deg_max >= 0")
        if self.margin < 16:
            raise KoenigsError("bounds need margin >= 16")
        need = 2 * self.deg_max + self.j_max + self.margin
        if self.order < need:
            raise KoenigsError(f"bounds need order >= 2*deg_max + j_max + margin = {need}")

    @property
    def solve_order(self) -> int:
        """Number of series coefficients matched by the Padé system."""
        return 2 * self.deg_max + self.margin

    def grid(self) -> list[tuple[int, int]]:
        """``r`` ascending, then ``|j|`` ascending, positive ``j`` before negative."""
        js = [0]
        for a in range(1, self.j_max + 1):
            js += [a, -a]
        return [(r, j) for r in range(1, self.r_max + 1) for j in js]


@dataclass(frozen=True)
class DetectionReport:
    outcome: str
    bounds: DetectionBounds
    equation_tau: RittEquationTau | None = None
    equation_sigma: RittEquationSigma | None = None
    residual_orders_checked: tuple[int, ...] = ()
    conditional_statement: str = ""
    grid_points: int = 0
    closed_form: RationalFunction | None = None
    residuals: tuple[Residual, ...] = field(default=(), compare=False)


# -- verification -----------------------------------------------------------


def _times(F: RationalFunction, s: TruncatedSeries) -> TruncatedSeries:
    return expand_ratfun(F, s.precision + ord_at_zero(F)) * s


def verify_equation_tau(pair: SchroderPair, eq: RittEquationTau) -> Residual:
    """Exact residual of ``(tau')**r - A tau**j``; rejects ``ord_0 A != -j`` up front."""
    name = f"tau-side (r={eq.r}, j={eq.j})"
    if eq.A.is_zero():
        return Residual(name, 0, 0, "A is zero")
    v = ord_at_zero(eq.A)
    if v != -eq.j:
        return Residual(name, 0, None, f"ord_0 A = {v} but -j = {-eq.j}")
    if pair.order - 1 < MIN_CHECKED:
        raise InsufficientOrderError(MIN_CHECKED + 1, pair.order, "verify_equation_tau")
    tau = pair.tau
    lhs = tau.derive() ** eq.r
    rhs = _times(eq.A, tau ** eq.j)
    return Residual.of(name, lhs - rhs)


def verify_equation_sigma(pair: SchroderPair, eq: RittEquationSigma) -> Residual:
    """Exact residual of ``(sigma')**r - t**j A(sigma)``.

    With ``A = x**(-j) * Ahat`` the right side is ``(sigma/t)**(-j) * Ahat(sigma)``,
    a unit power series, so no Laurent cancellation is involved.
    """
    name = f"sigma-side (r={eq.r}, j={eq.j})"
    if eq.A.is_zero():
        return Residual(name, 0, 0, "A is zero")
    if pair.order - 1 < MIN_CHECKED:
        raise InsufficientOrderError(MIN_CHECKED + 1, pair.order, "verify_equation_sigma")
    sigma = pair.sigma
    ahat = eq.A * RationalFunction.x() ** eq.j
    if ord_at_zero(ahat) != 0:
        return Residual(name, 0, None, f"ord_0 A = {ord_at_zero(eq.A)} but -j = {-eq.j}")
    unit = sigma.shift(-1)
    lhs = sigma.derive() ** eq.r
    rhs = unit ** (-eq.j) * ratfun_at_series(ahat, sigma)
    return Residual.of(name, lhs - rhs)


def to_sigma(eq: RittEquationTau) -> RittEquationSigma:
    """Change of variables ``x = sigma(t)``: ``(sigma')**(-r) = t**j A(sigma)``."""
    return RittEquationSigma(-eq.r, eq.j, eq.A)


# -- search -----------------------------------------------------------------


class _GridSeries:
    """Low-precision powers of ``tau'`` and ``tau`` shared by all grid points."""

    def __init__(self, tau: TruncatedSeries, bounds: DetectionBounds):
        M = bounds.solve_order
        t = tau.truncate(M + 1)
        self.M = M
        d = t.derive()
        self.dpow = {1: d}
        for r in range(2, bounds.r_max + 1):
            self.dpow[r] = self.dpow[r - 1] * d
        self.tpow = {0: TruncatedSeries.one(M)}
        inv = t.invert()
        for a in range(1, bounds.j_max + 1):
            self.tpow[a] = t if a == 1 else self.tpow[a - 1] * t
            self.tpow[-a] = inv if a == 1 else self.tpow[-(a - 1)] * inv

    def unit_series(self, r: int, j: int) -> TruncatedSeries:
        """``x**j (tau')**r tau**(-j)`` modulo ``x**M``."""
        return (self.dpow[r] * self.tpow[-j]).shift(j).truncate(self.M)


def _pade_rows(S: TruncatedSeries, D: int, M: int) -> tuple[list[list[int]], list]:
    """Integer rows of ``p(x) - d(x) S(x) = 0 mod x**M``; unknowns ``d_0..d_D, p_0..p_D``."""
    nums = S._dense(0, M)
    den = S._den
    rows = []
    for m in range(M):
        row = [-nums[m - i] if m - i >= 0 else 0 for i in range(D + 1)]
        row += [den if i == m else 0 for i in range(D + 1)]
        rows.append(row)
    return rows, den


def _solve_point(grid: _GridSeries, r: int, j: int, D: int, exact_only: bool):
    S = grid.unit_series(r, j)
    if S.valuation != 0:
        return None
    rows, den = _pade_rows(S, D, grid.M)
    if not exact_only:
        for p in PRIMES:
            if den % p:
                if rank_mod_p(rows, p) == 2 * (D + 1):
                    return None  # full column rank mod p: only the zero solution over Q
                break
    kernel = nullspace([[Fraction(int(v)) for v in row] for row in rows])
    if not kernel:
        return None
    vec = kernel[0]
    d = Polynomial(vec[:D + 1])
    p = Polynomial(vec[D + 1:])
    if d.is_zero() or p.is_zero():
        return None
    A = ratfun_normalize(p, d * Polynomial.x() ** j) if j >= 0 else ratfun_normalize(
        p * Polynomial.x() ** (-j), d)
    if ord_at_zero(A) != -j:
        return None
    return RittEquationTau(r, j, A)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RITT_THREADS", "1")))
    except ValueError:
        return 1


def _statement(outcome: str, bounds: DetectionBounds, eq: RittEquationTau | None = None,
               closed: RationalFunction | None = None) -> str:
    if outcome == HOMOGRAPHY:
        return (f"R is a homography, so the Poincare function sigma is rational "
                f"(sigma is rational iff R is a homography): sigma(t) = {closed.to_str('t')}. "
                "Transcendence search skipped.")
    if outcome == HIT:
        return (f"tau satisfies (tau')^{eq.r} = A(x)*tau^{eq.j} with A = {eq.A}; equivalently "
                f"(sigma')^{-eq.r} = t^{eq.j}*A(sigma), a Ritt type-(A) equation. sigma is "
                "differentially algebraic over Q(t) if and only if it satisfies some type-(A) "
                "equation, so sigma is differentially algebraic.")
    return (f"No equation (tau')^r = A(x)*tau^j with 1 <= r <= {bounds.r_max}, "
            f"|j| <= {bounds.j_max}, deg num A, deg den A <= {bounds.deg_max} exists: every grid "
            f"point gives an inconsistent linear system modulo x^{bounds.solve_order}. "
            "Differential algebraicity of sigma over Q(t) is EQUIVALENT to the existence of SOME "
            "Ritt type-(A) equation (y')^r = t^j*A(y); this search refutes only the finite grid "
            "above, so the outcome is evidence of differential transcendence, never a proof.")


def detect(pair: SchroderPair, bounds: DetectionBounds | None = None,
           exact_only: bool = False) -> DetectionReport:
    """First verified hit in canonical grid order, or a bounded no-hit.

    ``exact_only`` skips the modular full-rank shortcut and solves every
    system by exact elimination over Q.
    """
    bounds = bounds or DetectionBounds()
    if pair.order < bounds.order:
        raise KoenigsError(f"pair order {pair.order} is below bounds.order {bounds.order}")
    if pair.map.is_homography:
        closed = homography_closed_form(pair.map)
        return DetectionReport(HOMOGRAPHY, bounds, closed_form=closed,
                               conditional_statement=_statement(HOMOGRAPHY, bounds, closed=closed))
    grid = _GridSeries(pair.tau, bounds)
    points = bounds.grid()

    def attempt(point):
        return _solve_point(grid, point[0], point[1], bounds.deg_max, exact_only)

    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            candidates = pool.map(attempt, points)
            results = list(candidates)
    else:
        results = map(attempt, points)
    tried = 0
    for point, eq in zip(points, results):
        tried += 1
        if eq is None:
            continue
        res = verify_equation_tau(pair, eq)
        if not res.ok:
            continue
        seq = to_sigma(eq)
        sres = verify_equation_sigma(pair, seq)
        if not sres.ok:
            continue
        return DetectionReport(HIT, bounds, eq, seq, (res.order, sres.order),
                               _statement(HIT, bounds, eq), tried, residuals=(res, sres))
    return DetectionReport(NO_HIT, bounds, residual_orders_checked=(bounds.solve_order,),
                           conditional_statement=_statement(NO_HIT, bounds), grid_points=tried)


def transcendence_report(pair: SchroderPair, bounds: DetectionBounds | None = None,
                         confirm: bool = True) -> DetectionReport:
    """:func:`detect`, with hits re-verified on a pair recomputed at twice the order."""
    report = detect(pair, bounds)
    if report.outcome != HIT or not confirm:
        return report
    big = solve_koenigs(pair.map, 2 * pair.order)
    res = verify_equation_tau(big, report.equation_tau)
    sres = verify_equation_sigma(big, report.equation_sigma)
    if not (res.ok and sres.ok):
        raise KoenigsError(f"hit failed confirmation at order {big.order}: {res}, {sres}")
    return DetectionReport(
        HIT, report.bounds, report.equation_tau, report.equation_sigma,
        report.residual_orders_checked + (res.order, sres.order),
        report.conditional_statement, report.grid_points,
        residuals=report.residuals + (res, sres),
    )
