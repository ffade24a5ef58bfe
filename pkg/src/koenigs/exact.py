"""Rationals, dense polynomials and normalized rational functions over Q.

``Rational`` is :class:`fractions.Fraction`; its invariants (lowest terms,
positive denominator, ``0 == 0/1``) are exactly the ones we need.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import KoenigsError

Rational = Fraction
Number = Union[int, Fraction]


def _trim(coeffs: Iterable[Number]) -> tuple[Fraction, ...]:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies ``x**i``."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def valuation(self) -> int:
        if not self.coeffs:
            raise KoenigsError("valuation of zero")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def __call__(self, value):
        acc = Fraction(0) if isinstance(value, (int, Fraction)) else value * 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __add__(self, other: "Polynomial | Number") -> "Polynomial":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: "Polynomial | Number") -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other: Number) -> "Polynomial":
        return _as_poly(other) - self

    def __mul__(self, other: "Polynomial | Number") -> "Polynomial":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "Polynomial":
        if m < 0:
            raise ValueError("negative polynomial power")
        result, base = Polynomial((1,)), self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = 1 / other.lc
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv
            if c:
                quo[i - dq] = c
                for j, y in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * y
        return Polynomial(quo), Polynomial(rem[:dq] if dq > 0 else ())

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return Polynomial(c * inv for c in self.coeffs)

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def shift_down(self, k: int) -> "Polynomial":
        """Divide by ``x**k`` (caller guarantees exactness)."""
        return Polynomial(self.coeffs[k:])

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_str()


def _as_poly(value: "Polynomial | Number") -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial((value,))


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over Q by the Euclidean scheme."""
    if a.is_zero() and b.is_zero():
        raise KoenigsError("gcd of zeros")
    while not b.is_zero():
        a, b = b, a.divmod(b)[1].monic()
    return a.monic()


@dataclass(frozen=True)
class RationalFunction:
    """``num/den`` with coprime parts and monic denominator.

    Build through :func:`ratfun_normalize` (or the arithmetic operators);
    the raw constructor trusts its arguments.
    """

    num: Polynomial
    den: Polynomial

    @classmethod
    def from_poly(cls, p: Polynomial | Number) -> "RationalFunction":
        return cls(_as_poly(p), Polynomial((1,)))

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls.from_poly(Polynomial.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other) -> "RationalFunction":
        other = _as_ratfun(other)
        if self.den == other.den:
            return ratfun_normalize(self.num + other.num, self.den)
        return ratfun_normalize(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_ratfun(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _as_ratfun(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _as_ratfun(other)
        return ratfun_normalize(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_ratfun(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return ratfun_normalize(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_ratfun(other) / self

    def __pow__(self, m: int) -> "RationalFunction":
        if m >= 0:
            return RationalFunction(self.num ** m, self.den ** m).normalized()
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return ratfun_normalize(self.den ** (-m), self.num ** (-m))

    def normalized(self) -> "RationalFunction":
        return ratfun_normalize(self.num, self.den)

    def __call__(self, value):
        if isinstance(value, (int, Fraction)):
            d = self.den(Fraction(value))
            if d == 0:
                raise ZeroDivisionError("pole of rational function")
            return self.num(Fraction(value)) / d
        return self.num(value) / self.den(value)

    def derivative(self) -> "RationalFunction":
        return ratfun_derivative(self)

    def ord_at_zero(self) -> int:
        return ord_at_zero(self)

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """``self(inner(x))`` as a normalized rational function."""
        return _horner(self.num, inner) / _horner(self.den, inner)

    def to_str(self, var: str = "x") -> str:
        n = self.num.to_str(var)
        if self.is_polynomial():
            return n
        d = self.den.to_str(var)
        if len(self.num.coeffs) - self.num.coeffs.count(0) > 1:
            n = f"({n})"
        return f"{n}/({d})"

    def __str__(self) -> str:
        return self.to_str()


def _horner(p: Polynomial, inner: RationalFunction) -> RationalFunction:
    acc = RationalFunction.from_poly(0)
    for c in reversed(p.coeffs):
        acc = acc * inner + c
    return acc


def _as_ratfun(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.from_poly(value)


def ratfun_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    if den.is_zero():
        raise KoenigsError("rational function with zero denominator")
    if num.is_zero():
        return RationalFunction(Polynomial(), Polynomial((1,)))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
    lc = den.lc
    if lc != 1:
        inv = 1 / lc
        num = Polynomial(c * inv for c in num.coeffs)
        den = Polynomial(c * inv for c in den.coeffs)
    return RationalFunction(num, den)


def ratfun_derivative(F: RationalFunction) -> RationalFunction:
    if F.is_polynomial():
        return RationalFunction(F.num.derivative(), F.den)
    n, d = F.num, F.den
    return ratfun_normalize(n.derivative() * d - n * d.derivative(), d * d)


def ord_at_zero(F: RationalFunction) -> int:
    """Valuation at 0; negative at a pole."""
    if F.is_zero():
        raise KoenigsError("valuation of zero")
    return F.num.valuation() - F.den.valuation()
