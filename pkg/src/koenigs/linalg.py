"""Exact kernels of small matrices over Q, with a modular full-rank shortcut."""
from __future__ import annotations

from fractions import Fraction

# Mersenne prime 2**61 - 1 and fallbacks, used only to certify full column rank
PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783)


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [[int(v) % p for v in row] for row in rows]
    ncols = len(m[0]) if m else 0
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        prow = m[rank]
        for r in range(rank + 1, len(m)):
            f = m[r][c]
            if f:
                f = f * inv % p
                row = m[r]
                for k in range(c, ncols):
                    row[k] = (row[k] - f * prow[k]) % p
        rank += 1
        if rank == len(m):
            break
    return rank


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns, scanning columns left to right."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column in increasing order."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
