"""Dimension, Hilbert series and regular-sequence certificates for R/I.

Everything is read off the initial ideal of a Groebner basis: ``R/I`` and
``R/in(I)`` share their Hilbert function, hence their dimension.  A
homogeneous sequence ``f_1..f_c`` in a polynomial ring is regular exactly when
``ideal(f)`` has codimension ``c``; the Hilbert series gives an independent
second witness, since it must then equal ``prod(1 - t^d_i) / (1 - t)^N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from .groebner import Caps, GroebnerBasis, MonomialIdeal, buchberger, initial_ideal, minimalize
from .poly import Monomial, Polynomial


# -- integer polynomials in t (lists of coefficients, lowest degree first) --

def _trim(a: list[int]) -> list[int]:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [0]


def _padd(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _pmul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _shift(a: list[int], k: int) -> list[int]:
    return [0] * k + list(a)


def _one_minus_t_pow(d: int) -> list[int]:
    out = [0] * (d + 1)
    out[0] += 1
    out[d] -= 1
    return _trim(out)


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / (1 - t)^denominator_exponent``."""

    numerator: tuple[int, ...]
    denominator_exponent: int

    def reduced(self) -> "HilbertSeries":
        """Cancel common factors of ``1 - t``; the exponent becomes the dimension."""
        num = list(self.numerator)
        k = self.denominator_exponent
        while k > 0 and any(num) and sum(num) == 0:
            # synthetic division by (1 - t): q_i = sum_{j<=i} num_j
            q, acc = [], 0
            for c in num[:-1]:
                acc += c
                q.append(acc)
            num, k = _trim(q), k - 1
        return HilbertSeries(tuple(_trim(num)), k)

    @property
    def dimension(self) -> int:
        """Krull dimension (order of the pole at t = 1); -1 for the zero module."""
        r = self.reduced()
        return r.denominator_exponent if any(r.numerator) else -1

    @property
    def multiplicity(self) -> int:
        return sum(self.reduced().numerator)

    def coefficient(self, d: int) -> int:
        """Value of the Hilbert function in degree ``d``."""
        if d < 0:
            return 0
        k = self.denominator_exponent
        total = 0
        for i, c in enumerate(self.numerator):
            if c and i <= d:
                total += c * (comb(d - i + k - 1, k - 1) if k > 0 else int(d == i))
        return total

    def coefficients(self, upto: int) -> list[int]:
        return [self.coefficient(d) for d in range(upto + 1)]

    def same_rational_function(self, other: "HilbertSeries") -> bool:
        a, b = self.reduced(), other.reduced()
        return a.numerator == b.numerator and a.denominator_exponent == b.denominator_exponent

    def __str__(self):
        terms = []
        for i, c in enumerate(self.numerator):
            if not c:
                continue
            power = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not power:
                terms.append(str(c))
            elif abs(c) == 1:
                terms.append(("-" if c < 0 else "") + power)
            else:
                terms.append(f"{c}*{power}")
        num = " + ".join(terms).replace("+ -", "- ") or "0"
        return f"({num}) / (1 - t)^{self.denominator_exponent}"


def complete_intersection_series(degrees: Sequence[int], nvars: int) -> HilbertSeries:
    num = [1]
    for d in degrees:
        num = _pmul(num, _one_minus_t_pow(d))
    return HilbertSeries(tuple(num), nvars)


# -- monomial ideal invariants --

def _supports(gens: Iterable[Monomial]) -> list[frozenset[int]]:
    sets = {frozenset(k for k, e in enumerate(g) if e) for g in gens}
    # keep inclusion-minimal supports only
    ordered = sorted(sets, key=len)
    out: list[frozenset[int]] = []
    for s in ordered:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def _min_hitting_set(sets: list[frozenset[int]]) -> int:
    """Size of a smallest set meeting every member of ``sets`` (branch and bound)."""
    best = [len(set().union(*sets)) if sets else 0]

    def disjoint_lower_bound(ss):
        used: set[int] = set()
        lb = 0
        for s in sorted(ss, key=len):
            if not (s & used):
                used |= s
                lb += 1
        return lb

    @lru_cache(maxsize=None)
    def solve(ss: frozenset) -> int:
        if not ss:
            return 0
        pivot = min(ss, key=lambda s: (len(s), sorted(s)))
        result = None
        for v in sorted(pivot):
            rest = frozenset(s for s in ss if v not in s)
            if result is not None and 1 + disjoint_lower_bound(rest) >= result:
                continue
            cand = 1 + solve(rest)
            if result is None or cand < result:
                result = cand
        return result

    return solve(frozenset(sets)) if sets else 0


def krull_dimension(mi: MonomialIdeal, nvars: int | None = None) -> int:
    """Dimension of ``k[x]/mi``: N minus the minimum vertex cover of the supports."""
    N = mi.nvars if nvars is None else nvars
    if any(sum(g) == 0 for g in mi.generators):
        return -1  # unit ideal: the quotient is zero
    return N - _min_hitting_set(_supports(mi.generators))


def _hilbert_numerator(gens: tuple[Monomial, ...]) -> list[int]:
    """Numerator of HS(k[x]/(gens)) over (1 - t)^N, by pivot splitting."""
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # variable-disjoint components multiply
    comps = _components(gens)
    if len(comps) > 1:
        out = [1]
        for comp in comps:
            out = _pmul(out, _hilbert_numerator(comp))
        return out
    if len(gens) == 1:
        return _one_minus_t_pow(sum(gens[0]))
    # pivot x_k^e: x_k occurs in most mixed generators, e is the median of its
    # exponents there, kept below any pure power of x_k so that x_k^e is not in I
    N = len(gens[0])
    mixed = [g for g in gens if sum(1 for e in g if e) > 1]
    counts = [0] * N
    for g in mixed:
        for k, e in enumerate(g):
            if e:
                counts[k] += 1
    k = max(range(N), key=lambda i: (counts[i], -i))
    exps = sorted(g[k] for g in mixed if g[k])
    e = exps[len(exps) // 2]
    for g in gens:
        if g[k] and sum(g) == g[k]:
            e = min(e, g[k] - 1)
    pivot = tuple(e if i == k else 0 for i in range(N))
    # HS(I) = HS(I + (P)) + t^deg(P) HS(I : P)
    plus = tuple(minimalize(list(gens) + [pivot]))
    colon = tuple(minimalize(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens))
    return _padd(_hilbert_numerator(plus), _shift(_hilbert_numerator(colon), e))


def _components(gens: tuple[Monomial, ...]) -> list[tuple[Monomial, ...]]:
    supports = [frozenset(k for k, e in enumerate(g) if e) for g in gens]
    parent = list(range(len(gens)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for i, s in enumerate(supports):
        for v in s:
            if v in owner:
                a, b = find(i), find(owner[v])
                if a != b:
                    parent[a] = b
            else:
                owner[v] = i
    groups: dict[int, list[Monomial]] = {}
    for i, g in enumerate(gens):
        groups.setdefault(find(i), []).append(g)
    return [tuple(v) for v in groups.values()]


def hilbert_series(mi: MonomialIdeal, nvars: int | None = None) -> HilbertSeries:
    N = mi.nvars if nvars is None else nvars
    return HilbertSeries(tuple(_hilbert_numerator(tuple(mi.generators))), N)


def standard_monomials_of_degree(mi: MonomialIdeal, d: int) -> Iterator[Monomial]:
    """Degree-``d`` monomials outside ``mi``, in descending lex order of exponents."""
    N = mi.nvars
    gens = mi.generators
    if d < 0:
        return
    exps = [0] * N

    def blocked() -> bool:
        # a partial monomial already divisible by a generator stays divisible
        for g in gens:
            for a, b in zip(g, exps):
                if a > b:
                    break
            else:
                return True
        return False

    def rec(k: int, left: int):
        if k == N - 1:
            exps[k] = left
            if not blocked():
                yield tuple(exps)
            exps[k] = 0
            return
        for e in range(left, -1, -1):
            exps[k] = e
            if e and blocked():
                continue
            yield from rec(k + 1, left - e)
        exps[k] = 0

    if N == 0:
        return
    yield from rec(0, d)


def count_standard_monomials(mi: MonomialIdeal, d: int) -> int:
    return sum(1 for _ in standard_monomials_of_degree(mi, d))


# -- regular sequences --

@dataclass(frozen=True)
class RegSeqCertificate:
    verdict: str  # "regular" | "not-regular"
    codim: int
    expected: int
    field: str
    status: str  # "certificate (char 0)" | "heuristic (char p)"
    gb_size: int
    gb_stats: dict = dc_field(default_factory=dict, compare=False)

    @property
    def regular(self) -> bool:
        return self.verdict == "regular"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "codim": self.codim,
            "expected": self.expected,
            "field": self.field,
            "status": self.status,
        }


def _check_forms(fs: Sequence[Polynomial]):
    if not fs:
        raise ValueError("empty sequence")
    for f in fs:
        if f.is_zero() or f.homogeneous_degree is None or f.homogeneous_degree < 1:
            raise ValueError(f"not a homogeneous form of positive degree: {f}")


def codimension(gb: GroebnerBasis) -> int:
    return gb.nvars - krull_dimension(initial_ideal(gb))


def is_regular_sequence(
    fs: Sequence[Polynomial], *, gb: GroebnerBasis | None = None, caps: Caps | None = None
) -> RegSeqCertificate:
    """Decide regularity of homogeneous ``fs`` by comparing codimension with ``len(fs)``."""
    _check_forms(fs)
    if gb is None:
        gb = buchberger(list(fs), caps=caps)
    codim = codimension(gb)
    fld = fs[0].ring.field
    return RegSeqCertificate(
        verdict="regular" if codim == len(fs) else "not-regular",
        codim=codim,
        expected=len(fs),
        field=fld.label,
        status="certificate (char 0)" if fld.characteristic == 0 else f"heuristic (char {fld.characteristic})",
        gb_size=len(gb),
        gb_stats=dict(gb.stats),
    )


def hilbert_ci_check(fs: Sequence[Polynomial], *, gb: GroebnerBasis | None = None, caps: Caps | None = None) -> bool:
    """True iff HS(R/ideal(fs)) equals the complete-intersection series."""
    _check_forms(fs)
    if gb is None:
        gb = buchberger(list(fs), caps=caps)
    hs = hilbert_series(initial_ideal(gb))
    ci = complete_intersection_series([f.homogeneous_degree for f in fs], gb.nvars)
    return hs.same_rational_function(ci)
