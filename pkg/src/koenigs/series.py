"""Truncated Laurent series over Q with explicit guaranteed orders.

A :class:`TruncatedSeries` is known modulo ``x**order``: every operation
returns the tightest order its inputs guarantee, and nothing beyond that order
is ever reported.  Coefficients live as integers over one shared denominator
(see :mod:`koenigs._zvec`); :attr:`TruncatedSeries.coeffs` converts to
:class:`fractions.Fraction` on demand.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpz

from . import _zvec as zv
from .errors import KoenigsError
from .exact import Number, Polynomial, RationalFunction, ord_at_zero


class TruncatedSeries:
    """``sum(coeffs[i] * x**(valuation + i)) + O(x**order)``.

    In canonical form the first stored coefficient is nonzero; a series that
    is zero up to its order has no coefficients and ``valuation == order``.
    """

    __slots__ = ("valuation", "order", "_num", "_den")

    def __init__(self, coeffs: Iterable[Number] = (), valuation: int = 0, order: int | None = None):
        fr = [Fraction(c) for c in coeffs]
        if order is None:
            order = valuation + len(fr)
        den = mpz(1)
        for c in fr:
            den = zv.lcm(den, c.denominator)
        nums = [mpz(c.numerator) * (den // c.denominator) for c in fr]
        self._set(valuation, nums, den, order)

    @classmethod
    def _make(cls, valuation: int, nums: list, den, order: int) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        obj._set(valuation, nums, mpz(den), order)
        return obj

    def _set(self, valuation, nums, den, order):
        length = order - valuation
        if length <= 0:
            nums = []
        else:
            nums = list(nums[:length])
            if len(nums) < length:
                nums.extend([zv.ZERO] * (length - len(nums)))
        start = next((i for i, c in enumerate(nums) if c), None)
        if start is None:
            self.valuation, self.order, self._num, self._den = order, order, (), mpz(1)
            return
        nums, den = zv.reduce(nums[start:], den)
        self.valuation = valuation + start
        self.order = order
        self._num = tuple(nums)
        self._den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order, order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls((1,), 0, order)

    @classmethod
    def x(cls, order: int) -> "TruncatedSeries":
        return cls((1,), 1, order)

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> "TruncatedSeries":
        return cls(p.coeffs[:max(order, 0)], 0, order)

    # -- inspection ---------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        d = int(self._den)
        return tuple(Fraction(int(c), d) for c in self._num)

    def __getitem__(self, k: int) -> Fraction:
        if k >= self.order:
            raise KoenigsError(f"coefficient of x^{k} is beyond the known order {self.order}")
        if k < self.valuation:
            return Fraction(0)
        return Fraction(int(self._num[k - self.valuation]), int(self._den))

    def is_zero(self) -> bool:
        """True when the series vanishes to its guaranteed order."""
        return not self._num

    @property
    def precision(self) -> int:
        """Number of known coefficients from the valuation on."""
        return self.order - self.valuation

    def first_nonzero(self) -> int | None:
        return None if self.is_zero() else self.valuation

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.valuation, self.order, self._num, self._den) == (
            other.valuation, other.order, other._num, other._den)

    def __hash__(self):
        return hash((self.valuation, self.order, self._num, self._den))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c:
                terms.append(f"{c}*x^{self.valuation + i}")
        more = " + ..." if len(self._num) > 8 else ""
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries({body}{more} + O(x^{self.order}))"

    # -- shape changes --------------------------------------------------

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        return TruncatedSeries._make(self.valuation, list(self._num), self._den, order)

    def _extend(self, order: int) -> "TruncatedSeries":
        """Claim zeros up to ``order``; only for approximants inside solvers."""
        if self.is_zero():
            return TruncatedSeries._make(self.valuation, [], 1, order)
        return TruncatedSeries._make(self.valuation, list(self._num), self._den, order)

    def shift(self, k: int) -> "TruncatedSeries":
        """Exact multiplication by ``x**k``."""
        return TruncatedSeries._make(self.valuation + k, list(self._num), self._den, self.order + k)

    def _dense(self, start: int, n: int) -> list:
        """Numerators of the coefficients of ``x**start .. x**(start+n-1)``."""
        out = [zv.ZERO] * n
        off = self.valuation - start
        for i, c in enumerate(self._num):
            if 0 <= i + off < n:
                out[i + off] = c
        return out

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries((other,), 0, self.order) if other else TruncatedSeries.zero(self.order)
        order = min(self.order, other.order)
        if self.is_zero():
            return other.truncate(order)
        if other.is_zero():
            return self.truncate(order)
        v = min(self.valuation, other.valuation)
        n = order - v
        den = zv.lcm(self._den, other._den)
        a = zv.rescale(self._dense(v, n), self._den, den)
        b = zv.rescale(other._dense(v, n), other._den, den)
        return TruncatedSeries._make(v, [x + y for x, y in zip(a, b)], den, order)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries._make(self.valuation, [-c for c in self._num], self._den, self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def scale(self, c: Number) -> "TruncatedSeries":
        c = Fraction(c)
        if c == 0:
            return TruncatedSeries.zero(self.order)
        return TruncatedSeries._make(self.valuation, [x * c.numerator for x in self._num],
                                     self._den * c.denominator, self.order)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        v = self.valuation + other.valuation
        order = min(self.valuation + other.order, other.valuation + self.order)
        n = order - v
        nums = zv.mul(list(self._num), list(other._num), n)
        return TruncatedSeries._make(v, nums, self._den * other._den, order)

    def __rmul__(self, other) -> "TruncatedSeries":
        return self.scale(other)

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return self * other.invert()
        return self.scale(1 / Fraction(other))

    def __pow__(self, m: int) -> "TruncatedSeries":
        return series_pow(self, m)

    # -- analytic operations ------------------------------------------

    def derive(self) -> "TruncatedSeries":
        v = self.valuation
        nums = [c * (v + i) for i, c in enumerate(self._num)]
        return TruncatedSeries._make(v - 1, nums, self._den, self.order - 1)

    def invert(self) -> "TruncatedSeries":
        if self.is_zero():
            raise KoenigsError("cannot invert zero series")
        p = self.precision
        nums, den = _unit_inverse(list(self._num), self._den, p)
        return TruncatedSeries._make(-self.valuation, nums, den, p - self.valuation)

    def dilate(self, c: Number) -> "TruncatedSeries":
        """``f(c*x)``."""
        c = Fraction(c)
        if c == 0:
            raise KoenigsError("dilation by zero")
        if self.is_zero():
            return self
        a, b = mpz(c.numerator), mpz(c.denominator)
        m = len(self._num) - 1
        # c**k = a**k * b**(m-k) / b**m keeps the numerators integral
        bpows = [mpz(1)] * (m + 1)
        for k in range(m - 1, -1, -1):
            bpows[k] = bpows[k + 1] * b
        nums, apow = [], mpz(1)
        for k, x in enumerate(self._num):
            nums.append(x * apow * bpows[k])
            apow *= a
        out = TruncatedSeries._make(self.valuation, nums, self._den * bpows[0], self.order)
        return out.scale(c ** self.valuation) if self.valuation else out

    def compose(self, g: "TruncatedSeries") -> "TruncatedSeries":
        return series_compose(self, g)

    def reversion(self) -> "TruncatedSeries":
        return series_reversion(self)


def _unit_inverse(nums: list, den, p: int):
    """Newton inverse of ``nums/den`` (nonzero constant term) modulo ``x**p``."""
    if p <= 0:
        return [], mpz(1)
    u0 = nums[0]
    # h = den/u0 modulo x^1
    h, hden = [mpz(den) * (1 if u0 > 0 else -1)], abs(u0)
    prec = 1
    while prec < p:
        prec = min(2 * prec, p)
        uh = zv.mul(nums[:prec], h, prec)
        # e = 1 - u*h, over den*hden
        dd = den * hden
        e = [-c for c in uh]
        e[0] += dd
        corr = zv.mul(h, e, prec)
        # h + h*e  over hden*dd
        h = [x * dd + y for x, y in zip(h + [zv.ZERO] * (prec - len(h)), corr)]
        h, hden = zv.reduce(h, hden * dd)
    return h, hden


def series_arith(f: TruncatedSeries, g: TruncatedSeries, op: str) -> TruncatedSeries:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown series operation {op!r}")


def series_invert(f: TruncatedSeries) -> TruncatedSeries:
    return f.invert()


def series_derive(f: TruncatedSeries) -> TruncatedSeries:
    return f.derive()


def series_pow(f: TruncatedSeries, m: int) -> TruncatedSeries:
    if m < 0:
        if f.is_zero():
            raise KoenigsError("negative power of a series that is zero to its order")
        return series_pow(f.invert(), -m)
    if m == 0:
        return TruncatedSeries.one(f.precision)
    result = None
    base = f
    while m:
        if m & 1:
            result = base if result is None else result * base
        m >>= 1
        if m:
            base = base * base
    return result


def series_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``f(g(x))`` for ``g`` of positive valuation.

    A Laurent ``f`` is split as ``x**v * u`` with ``u`` a unit, giving
    ``g**v * u(g)``; this needs ``g`` to be nonzero to its order.
    """
    if g.valuation < 1:
        raise KoenigsError("composition requires positive valuation")
    if f.valuation < 0:
        if g.is_zero():
            raise KoenigsError("composition of a Laurent series needs a nonzero inner series")
        unit = f.shift(-f.valuation)
        return series_pow(g, f.valuation) * series_compose(unit, g)
    w = g.valuation
    n = min(w * f.order, g.order + (max(f.valuation, 1) - 1) * w)
    if f.is_zero():
        return TruncatedSeries.zero(n)
    kmax = min(f.order - 1, (n - 1) // w)
    fc = f._dense(0, kmax + 1)
    gv = g._dense(0, n)
    nums, den = _compose_dense(fc, f._den, gv, g._den, n)
    return TruncatedSeries._make(0, nums, den, n)


def _compose_dense(fc: list, fden, gv: list, gden, n: int):
    """Brent-Kung style evaluation of ``sum fc[k]/fden * (gv/gden)**k`` modulo ``x**n``."""
    kmax = len(fc) - 1
    m = max(1, math.isqrt(kmax) + 1)
    # powers g^0 .. g^m, each (nums, den)
    powers = [([zv.ONE] + [zv.ZERO] * (n - 1), mpz(1))]
    for _ in range(m):
        pn, pd = powers[-1]
        powers.append(zv.reduce(zv.mul(pn, gv, n), pd * gden))
    common = mpz(1)
    for _, pd in powers[:m]:
        common = zv.lcm(common, pd)
    scaled = [zv.rescale(pn, pd, common) for pn, pd in powers[:m]]
    blocks = []
    for start in range(0, kmax + 1, m):
        acc = [zv.ZERO] * n
        for j in range(m):
            c = fc[start + j] if start + j <= kmax else 0
            if c:
                pj = scaled[j]
                for i in range(n):
                    if pj[i]:
                        acc[i] += c * pj[i]
        blocks.append(zv.reduce(acc, fden * common))
    gm_n, gm_d = powers[m]
    acc, acc_d = blocks[-1]
    for bn, bd in reversed(blocks[:-1]):
        prod = zv.mul(acc, gm_n, n)
        pd = acc_d * gm_d
        den = zv.lcm(pd, bd)
        prod = zv.rescale(prod, pd, den)
        bn = zv.rescale(bn, bd, den)
        acc, acc_d = zv.reduce([x + y for x, y in zip(prod, bn)], den)
    return acc, acc_d


def series_reversion(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of a valuation-one series, by Newton iteration."""
    if f.is_zero() or f.valuation != 1:
        raise KoenigsError("not reversible: need valuation 1 and nonzero linear coefficient")
    N = f.order
    g = TruncatedSeries((1 / f[1],), 1, min(2, N))
    p = g.order
    while p < N:
        P = min(2 * p - 1, N)
        gp = g._extend(P)
        err = series_compose(f.truncate(P), gp) - TruncatedSeries.x(P)
        d = g.derive()  # 1/f'(g) = g' for the true inverse
        g = (gp - err * d).truncate(P)
        p = P
    return g


def expand_ratfun(F: RationalFunction, order: int) -> TruncatedSeries:
    """Laurent expansion of ``F`` at 0, exact modulo ``x**order``."""
    if F.is_zero():
        return TruncatedSeries.zero(order)
    a = F.num.valuation()
    b = F.den.valuation()
    v = a - b
    prec = order - v
    if prec <= 0:
        return TruncatedSeries.zero(order)
    num = TruncatedSeries(F.num.coeffs[a:a + prec], 0, prec)
    den = TruncatedSeries(F.den.coeffs[b:b + prec], 0, prec)
    return (num * den.invert()).shift(v)


def ratfun_at_series(F: RationalFunction, g: TruncatedSeries) -> TruncatedSeries:
    """``F(g)`` by evaluating numerator and denominator at ``g``."""
    num = _poly_at_series(F.num, g)
    if F.is_polynomial():
        return num
    return num * _poly_at_series(F.den, g).invert()


def _poly_at_series(p: Polynomial, g: TruncatedSeries) -> TruncatedSeries:
    acc = TruncatedSeries.zero(g.order) if p.is_zero() else None
    for c in reversed(p.coeffs):
        acc = TruncatedSeries((c,), 0, g.order) if acc is None else acc * g + c
    return acc


def compose_ratfun(f: TruncatedSeries, F: RationalFunction) -> TruncatedSeries:
    """``f(F(x))`` for a rational ``F`` with ``F(0) = 0``.

    Uses the homogeneous Horner scheme ``sum f_k P**k Q**(K-k) / Q**K`` so
    every step multiplies by a short polynomial.
    """
    if F.is_zero() or ord_at_zero(F) < 1:
        raise KoenigsError("composition requires positive valuation")
    w = ord_at_zero(F)
    if f.valuation < 0:
        unit = f.shift(-f.valuation)
        inner = F ** f.valuation
        return expand_ratfun(inner, f.valuation * w + unit.order * w) * compose_ratfun(unit, F)
    n = w * f.order
    if f.is_zero():
        return TruncatedSeries.zero(n)
    kmax = (n - 1) // w
    fc = f._dense(0, kmax + 1)
    scale = 1
    for c in F.num.coeffs + F.den.coeffs:
        scale = math.lcm(scale, c.denominator)
    P = [mpz(c * scale) for c in F.num.coeffs]
    Q = [mpz(c * scale) for c in F.den.coeffs]
    h = [zv.ZERO] * n
    h[0] = fc[kmax]
    qpow = [zv.ONE] + [zv.ZERO] * (n - 1)
    for k in range(kmax - 1, -1, -1):
        qpow = zv.mul_poly(qpow, Q, n)
        h = zv.mul_poly(h, P, n)
        c = fc[k]
        if c:
            for i in range(n):
                if qpow[i]:
                    h[i] += c * qpow[i]
    s = TruncatedSeries._make(0, h, f._den, n)
    if len(Q) == 1 and kmax > 0:
        return s.scale(Fraction(1, int(Q[0]) ** kmax))
    if kmax == 0:
        return s
    qk = TruncatedSeries._make(0, qpow, 1, n)
    return s * qk.invert()
