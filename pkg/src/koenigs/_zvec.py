"""Dense integer-vector kernels behind the series layer.

A truncated series is stored as a list of integers over one shared positive
denominator.  Products are done by Kronecker substitution: both operands are
packed into a single big integer, multiplied once by GMP, and unpacked.
"""
from __future__ import annotations

import gmpy2
from gmpy2 import mpz

ZERO = mpz(0)
ONE = mpz(1)

# below this many coefficient pairs schoolbook multiplication wins
_SCHOOLBOOK_WORK = 64


def as_mpz(values) -> list:
    return [mpz(v) for v in values]


def max_bits(v) -> int:
    return max((abs(c).bit_length() for c in v), default=0)


def _pack(v, width: int):
    """Pack signed integers into ``sum v[i] * 2**(8*width*i)``."""
    pos = bytearray()
    neg = bytearray()
    blank = bytes(width)
    for c in v:
        if c >= 0:
            pos += c.to_bytes(width, "little")
            neg += blank
        else:
            pos += blank
            neg += (-c).to_bytes(width, "little")
    return mpz.from_bytes(bytes(pos), "little") - mpz.from_bytes(bytes(neg), "little")


def _unpack(packed, width: int, n: int) -> list:
    half = ONE << (8 * width - 1)
    bias = mpz.from_bytes((bytes(width - 1) + b"\x80") * n, "little")
    low = gmpy2.f_mod_2exp(packed + bias, 8 * width * n)
    raw = low.to_bytes(width * n, "little")
    return [mpz.from_bytes(raw[i * width:(i + 1) * width], "little") - half for i in range(n)]


def mul(a, b, n: int) -> list:
    """Product of integer vectors, truncated to ``n`` entries."""
    a = a[:n]
    b = b[:n]
    la, lb = len(a), len(b)
    if n <= 0:
        return []
    if la == 0 or lb == 0:
        return [ZERO] * n
    out_len = min(n, la + lb - 1)
    if la * lb <= _SCHOOLBOOK_WORK or min(la, lb) <= 2:
        out = [ZERO] * out_len
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(min(lb, out_len - i)):
                out[i + j] += x * b[j]
    else:
        w = max_bits(a) + max_bits(b) + min(la, lb).bit_length() + 1
        width = (w + 7) // 8
        out = _unpack(_pack(a, width) * _pack(b, width), width, out_len)
    out.extend([ZERO] * (n - out_len))
    return out


def mul_poly(a, p, n: int) -> list:
    """Product of a dense vector with a short (polynomial) vector, truncated to ``n``."""
    out = [ZERO] * n
    for i, c in enumerate(p):
        if not c or i >= n:
            continue
        for k in range(min(len(a), n - i)):
            out[i + k] += c * a[k]
    return out


def content(v, den):
    """gcd of ``den`` and every entry of ``v``."""
    g = mpz(den)
    for c in v:
        if g == 1:
            break
        if c:
            g = gmpy2.gcd(g, c)
    return g


def reduce(v, den):
    den = mpz(den)
    if den < 0:
        v = [-c for c in v]
        den = -den
    g = content(v, den)
    if g != 1:
        v = [c // g for c in v]
        den //= g
    return v, den


def rescale(v, den, target):
    """Re-express ``v/den`` over the multiple ``target`` of ``den``."""
    f = target // den
    if f == 1:
        return list(v)
    return [c * f for c in v]


def lcm(a, b):
    return gmpy2.lcm(mpz(a), mpz(b))
