"""Exact rank computations on sparse matrices.

A sparse matrix is a list of rows, each a ``{column: value}`` dict with no
zero entries.  Pivots are always the first nonzero column of a row, so the
elimination order (and therefore every intermediate matrix) is deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from gmpy2 import gcd, mpz

from .field import FieldSpec

SparseRow = dict


def rank_mod_p(rows: Iterable[SparseRow], p: int) -> int:
    """Rank over GF(p) by incremental row reduction."""
    pivots: dict[int, dict] = {}
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                inv = pow(r[col], -1, p)
                pivots[col] = {c: v * inv % p for c, v in r.items()}
                break
            a = r[col]
            for c, v in piv.items():
                nv = (r.get(c, 0) - a * v) % p
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return len(pivots)


def _primitive(row: dict) -> dict:
    g = mpz(0)
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def integer_row(row: SparseRow) -> dict:
    """Clear denominators of a rational row (rank is unaffected)."""
    den = 1
    for v in row.values():
        d = int(getattr(v, "denominator", 1))
        den = lcm(den, d)
    out = {}
    for c, v in row.items():
        if v:
            out[c] = mpz(v * den) if den != 1 else mpz(v)
    return out


def rank_fraction_free(rows: Iterable[SparseRow]) -> int:
    """Rank over QQ using integer-only (fraction-free) elimination.

    Each update is ``row <- (P/g) row - (a/g) pivot`` with ``g = gcd(P, a)``,
    followed by removal of the row content, so entries stay integers.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        r = _primitive(integer_row(row))
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                if r[col] < 0:
                    r = {c: -v for c, v in r.items()}
                pivots[col] = r
                break
            P, a = piv[col], r[col]
            g = gcd(P, a)
            sp, sa = P // g, a // g
            out = {c: sp * v for c, v in r.items()} if sp != 1 else dict(r)
            for c, v in piv.items():
                nv = out.get(c, 0) - sa * v
                if nv:
                    out[c] = nv
                else:
                    out.pop(c, None)
            r = _primitive(out)
    return len(pivots)


def rank(rows: Iterable[SparseRow], field: FieldSpec) -> int:
    if field.characteristic:
        return rank_mod_p(rows, field.characteristic)
    return rank_fraction_free(rows)


def bareiss_rank(matrix: Sequence[Sequence]) -> int:
    """Rank of a dense rational matrix by Bareiss' fraction-free elimination."""
    den = 1
    for row in matrix:
        for v in row:
            den = lcm(den, Fraction(v).denominator)
    a = [[int(Fraction(v) * den) for v in row] for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev, r = 1, 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        P = a[r][col]
        for i in range(r + 1, nrows):
            ai = a[i][col]
            a[i] = [(P * a[i][k] - ai * a[r][k]) // prev for k in range(ncols)]
        prev = P
        r += 1
    return r


def matmul_sparse(a: Sequence[SparseRow], b: Sequence[SparseRow], field: FieldSpec) -> list[dict]:
    """Product ``a @ b`` where rows of ``a`` index into rows of ``b``."""
    p = field.characteristic
    out = []
    for row in a:
        acc: dict = {}
        for k, v in row.items():
            for c, w in b[k].items():
                acc[c] = acc.get(c, 0) + v * w
        if p:
            acc = {c: x % p for c, x in acc.items() if x % p}
        else:
            acc = {c: x for c, x in acc.items() if x}
        out.append(acc)
    return out
