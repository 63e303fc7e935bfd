"""Graded Betti numbers of R/I via the Koszul complex, and regularity.

``beta_{i,j}(R/I) = dim_k H_i(K(x_1..x_N) (x) R/I)_j``.  The chain space in
homological degree ``i`` and internal degree ``j`` has basis
``e_S (x) m`` with ``|S| = i`` (subsets in colex order) and ``m`` a standard
monomial of degree ``j - i``; the differential is

    d(e_S (x) m) = sum_{s in S} (-1)^pos(s, S) e_{S - s} (x) NF(x_s m).

Large instances go through an Artinian (or depth) reduction first: if
``l_1..l_K`` is a regular sequence of linear forms on R/I, then
``Tor^R(R/I, k) = Tor^{R/(l)}(R/(I + l), k)``.  Regularity of the chosen forms
is verified, not assumed, through the Hilbert series identity
``HS(R/(I + l)) = (1 - t)^K HS(R/I)``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import Sequence

from .groebner import Caps, GroebnerBasis, ResourceCapExceeded, buchberger, initial_ideal
from .invariants import hilbert_series, krull_dimension, standard_monomials_of_degree
from .linalg import matmul_sparse, rank
from .poly import Frame, Monomial, MonomialOrder, PolyRing, Polynomial

log = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 6000


@dataclass
class BettiTable:
    """Nonzero graded Betti numbers ``beta_{i,j}`` of R/I within computed bounds."""

    entries: dict[tuple[int, int], int]
    i_max: int
    j_max: int
    truncated: bool
    field: str = ""
    method: str = ""

    def beta(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def nonzero(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, b) for (i, j), b in self.entries.items() if b)

    @property
    def regularity(self) -> int | None:
        """``max(j - i)`` over nonzero entries (a lower bound if truncated)."""
        vals = [j - i for (i, j), b in self.entries.items() if b]
        return max(vals) if vals else None

    @property
    def projective_dimension(self) -> int | None:
        vals = [i for (i, j), b in self.entries.items() if b]
        return max(vals) if vals else None

    def same_entries(self, other: "BettiTable") -> bool:
        return self.nonzero() == other.nonzero()

    def total(self, i: int) -> int:
        return sum(b for (a, _), b in self.entries.items() if a == i)

    def render(self) -> str:
        """Conventional layout: columns are ``i``, rows are ``j - i``."""
        nz = self.nonzero()
        if not nz:
            return "(empty Betti table)"
        cols = range(0, max(i for i, _, _ in nz) + 1)
        rows = range(min(j - i for i, j, _ in nz), max(j - i for i, j, _ in nz) + 1)
        width = max(len(str(b)) for _, _, b in nz)
        width = max(width, len(str(max(cols))), 1)
        lines = ["       " + " ".join(str(i).rjust(width) for i in cols)]
        lines.append("total: " + " ".join(str(self.total(i)).rjust(width) for i in cols))
        for r in rows:
            cells = []
            for i in cols:
                b = self.beta(i, i + r)
                cells.append((str(b) if b else ".").rjust(width))
            lines.append(f"{r:>5}: " + " ".join(cells))
        if self.truncated:
            lines.append(f"(truncated: i <= {self.i_max}, j <= {self.j_max})")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "entries": [{"i": i, "j": j, "beta": b} for i, j, b in self.nonzero()],
            "truncated": self.truncated,
            "regularity": self.regularity,
            "i_max": self.i_max,
            "j_max": self.j_max,
            "field": self.field,
            "method": self.method,
        }


def ci_betti_analytic(c: int, d: int = 2) -> BettiTable:
    """Koszul resolution of a complete intersection of ``c`` forms of degree ``d``."""
    if c < 0 or d < 2:
        raise ValueError("need c >= 0 and d >= 2")
    entries = {(i, d * i): comb(c, i) for i in range(c + 1)}
    return BettiTable(entries, i_max=c, j_max=d * c, truncated=False, method="analytic")


def _colex(n: int, i: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), i), key=lambda s: s[::-1])


class KoszulComplex:
    """Koszul complex on all variables tensored with R/I, sliced by degree."""

    def __init__(self, gb: GroebnerBasis, max_dim: int | None = DEFAULT_MAX_DIM):
        if not gb.complete:
            raise ValueError("Koszul homology needs a complete Groebner basis")
        self.gb = gb
        self.N = gb.nvars
        self.field = gb.field
        self.max_dim = max_dim
        self.lead = initial_ideal(gb)
        self._std: dict[int, list[Monomial]] = {}
        self._std_index: dict[int, dict[Monomial, int]] = {}
        self._subsets: dict[int, list[tuple[int, ...]]] = {}
        self._subset_index: dict[int, dict[tuple[int, ...], int]] = {}
        self._mult: dict[tuple[int, Monomial], dict[int, object]] = {}
        self._rank: dict[tuple[int, int], int] = {}
        self._matrix: dict[tuple[int, int], list[dict]] = {}

    def standard_monomials(self, d: int) -> list[Monomial]:
        if d not in self._std:
            key = self.gb.order.key
            monos = sorted(standard_monomials_of_degree(self.lead, d), key=key, reverse=True)
            self._std[d] = monos
            self._std_index[d] = {m: k for k, m in enumerate(monos)}
        return self._std[d]

    def subsets(self, i: int) -> list[tuple[int, ...]]:
        if i not in self._subsets:
            subs = _colex(self.N, i) if 0 <= i <= self.N else []
            self._subsets[i] = subs
            self._subset_index[i] = {s: k for k, s in enumerate(subs)}
        return self._subsets[i]

    def chain_dim(self, i: int, j: int) -> int:
        if i < 0 or i > self.N or j - i < 0:
            return 0
        return comb(self.N, i) * len(self.standard_monomials(j - i))

    def _times_var(self, s: int, m: Monomial) -> dict[int, object]:
        """Coordinates of NF(x_s * m) in the standard basis of degree deg(m)+1."""
        key = (s, m)
        out = self._mult.get(key)
        if out is None:
            mono = tuple(e + (1 if k == s else 0) for k, e in enumerate(m))
            red = self.gb.reducer()
            enc, dec = self.gb.order.encode, self.gb.order.decode
            rem = red.reduce({enc(mono): self.field.one})
            d = sum(mono)
            self.standard_monomials(d)
            idx = self._std_index[d]
            out = {idx[dec(mm)]: c for mm, c in rem}
            self._mult[key] = out
        return out

    def differential(self, i: int, j: int) -> list[dict]:
        """Sparse matrix of ``d: C_{i,j} -> C_{i-1,j}``, one row per source basis vector."""
        key = (i, j)
        if key in self._matrix:
            return self._matrix[key]
        if i <= 0 or self.chain_dim(i, j) == 0:
            return [{} for _ in range(self.chain_dim(i, j))]
        rows_dim, cols_dim = self.chain_dim(i, j), self.chain_dim(i - 1, j)
        if self.max_dim is not None and max(rows_dim, cols_dim) > self.max_dim:
            raise ResourceCapExceeded(
                f"Koszul slice ({i},{j}) has dimension {max(rows_dim, cols_dim)} > max_dim={self.max_dim}"
            )
        p = self.field.characteristic
        src_std = self.standard_monomials(j - i)
        tgt_width = len(self.standard_monomials(j - i + 1))
        self.subsets(i - 1)
        tgt_index = self._subset_index[i - 1]
        rows = []
        for S in self.subsets(i):
            for m in src_std:
                row: dict = {}
                for pos, s in enumerate(S):
                    base = tgt_index[S[:pos] + S[pos + 1 :]] * tgt_width
                    for u, c in self._times_var(s, m).items():
                        col = base + u
                        v = row.get(col, 0) + (c if pos % 2 == 0 else -c)
                        if p:
                            v %= p
                        if v:
                            row[col] = v
                        else:
                            row.pop(col, None)
                rows.append(row)
        self._matrix[key] = rows
        return rows

    def rank(self, i: int, j: int) -> int:
        """Rank of ``d_{i,j}`` (zero outside the complex)."""
        if i <= 0 or i > self.N or self.chain_dim(i, j) == 0 or self.chain_dim(i - 1, j) == 0:
            return 0
        key = (i, j)
        if key not in self._rank:
            self._rank[key] = rank(self.differential(i, j), self.field)
        return self._rank[key]

    def betti(self, i: int, j: int) -> int:
        dim = self.chain_dim(i, j)
        if dim == 0:
            return 0
        return dim - self.rank(i, j) - self.rank(i + 1, j)

    def check_dd_zero(self, i: int, j: int) -> bool:
        """``d_{i-1,j} o d_{i,j} == 0`` on the slice."""
        if i < 2 or self.chain_dim(i, j) == 0 or self.chain_dim(i - 2, j) == 0:
            return True
        a = self.differential(i, j)
        b = self.differential(i - 1, j)
        return all(not row for row in matmul_sparse(a, b, self.field))

    def euler_characteristic_holds(self, j: int, table: BettiTable) -> bool:
        chain = sum((-1) ** i * self.chain_dim(i, j) for i in range(self.N + 1))
        homology = sum((-1) ** i * table.beta(i, j) for i in range(self.N + 1))
        return chain == homology


def standard_monomials(gb: GroebnerBasis, d: int) -> list[Monomial]:
    """Degree-``d`` monomials outside the initial ideal: a basis of (R/I)_d."""
    return sorted(
        standard_monomials_of_degree(initial_ideal(gb), d), key=gb.order.key, reverse=True
    )


def koszul_tor(gb: GroebnerBasis, i: int, j: int, max_dim: int | None = DEFAULT_MAX_DIM) -> int:
    """``beta_{i,j}(R/I)`` from the Koszul complex on all N variables."""
    if i < 0 or i > gb.nvars or j < 0:
        raise ValueError(f"need 0 <= i <= N and j >= 0, got ({i}, {j})")
    return KoszulComplex(gb, max_dim).betti(i, j)


# -- reduction by linear forms --

@dataclass
class LinearReduction:
    """``R/(I + l_1..l_K)`` presented in ``N - K`` variables."""

    gb: GroebnerBasis
    forms: list[list]  # coefficient vectors of l_k over the original variables
    K: int
    seed: int


def _substitute(f: Polynomial, images: list[Polynomial], ring: PolyRing) -> Polynomial:
    out = ring.zero()
    powers: dict[tuple[int, int], Polynomial] = {}
    for mono, c in f.terms:
        term = ring.constant(c)
        for k, e in enumerate(mono):
            if e:
                pk = powers.get((k, e))
                if pk is None:
                    pk = images[k] ** e
                    powers[(k, e)] = pk
                term = term * pk
        out = out + term
    return out


def reduce_by_linear_forms(
    gb: GroebnerBasis, K: int, seed: int = 0, density: int | None = 2, caps: Caps | None = None
) -> LinearReduction:
    """Quotient by ``K`` random linear forms ``x_v - sum_u a_{v,u} y_u``.

    The last ``K`` variables are eliminated; the remaining ``N - K`` become
    ``y_1..y_{N-K}`` in a one-column frame.  Each form involves ``density``
    kept variables (all of them if None) with small integer coefficients,
    which keeps coefficient growth over QQ in check.  No regularity claim is
    made here; see :func:`verified_reduction`.
    """
    N = gb.nvars
    keep = N - K
    if not 0 <= K < N:
        raise ValueError(f"cannot cut {N} variables by {K} forms")
    rng = random.Random(seed)
    fld = gb.field
    ring = PolyRing(Frame(keep, 1), fld, MonomialOrder(gb.order.kind))
    ys = [ring.var(s, 1) for s in range(1, keep + 1)]
    images = list(ys)
    forms = []
    width = keep if density is None else min(density, keep)
    for v in range(keep, N):
        coeffs = [0] * keep
        for u in rng.sample(range(keep), width):
            coeffs[u] = rng.choice((-3, -2, -1, 1, 2, 3))
        img = ring.zero()
        for u, a in enumerate(coeffs):
            if a:
                img = img + ys[u].scale(a)
        images.append(img)
        forms.append([fld.neg(fld(a)) for a in coeffs] + [0] * (v - keep) + [1] + [0] * (N - v - 1))
    gens = [_substitute(f, images, ring) for f in gb.source]
    gens = [g for g in gens if not g.is_zero()] or [ring.zero()]
    red_gb = buchberger(gens, caps=caps)
    return LinearReduction(red_gb, forms, K, seed)


def verified_reduction(gb: GroebnerBasis, tries: int = 4, caps: Caps | None = None) -> LinearReduction | None:
    """Largest verified regular sequence of linear forms on R/I (None if K = 0).

    Sparse forms are tried first, then denser ones.
    """
    hs = hilbert_series(initial_ideal(gb))
    dim = hs.dimension
    target = hs.numerator
    for K in range(dim, 0, -1):
        for attempt in range(tries):
            density = (2, 3, 4, None)[min(attempt, 3)]
            red = reduce_by_linear_forms(gb, K, seed=1000 * K + attempt, density=density, caps=caps)
            hs2 = hilbert_series(initial_ideal(red.gb))
            # HS(R/(I+l)) = (1-t)^K HS(R/I)  <=>  equal numerators over (1-t)^(N-K)
            if hs2.numerator == target and hs2.denominator_exponent == gb.nvars - K:
                return red
            log.debug("linear reduction K=%d attempt %d not regular", K, attempt)
    return None


@dataclass
class BettiComputation:
    """A Betti table together with the complex it was read from."""

    table: BettiTable
    complex: KoszulComplex
    reduction: LinearReduction | None = None
    slices: list[tuple[int, int]] = dc_field(default_factory=list)


def row_bounds(gb: GroebnerBasis) -> list[int]:
    """``b[i]``: beta_{i,j}(R/I) = 0 for every ``j > b[i]`` (``-1`` for an empty row).

    Betti numbers of R/I are bounded by those of R/in(I), and the Taylor
    resolution of the monomial ideal in(I) lives in degrees at most the lcm
    of ``i`` generators, so ``b[i] <= min(i * D, deg lcm(all leads))``.  For
    an Artinian quotient with top degree ``t`` also ``b[i] <= i + t``.
    """
    N = gb.nvars
    leads = gb.leading_monomials()
    out = [0] + [-1] * N
    if not leads:
        return out
    D = max(sum(m) for m in leads)
    L = sum(max(m[k] for m in leads) for k in range(N))
    hs = hilbert_series(initial_ideal(gb))
    top = None
    if hs.dimension <= 0:
        top = max((d for d, c in enumerate(_artinian_hf(hs)) if c), default=-1)
    for i in range(1, N + 1):
        b = min(i * D, L)
        if top is not None:
            b = min(b, i + top)
        out[i] = b if b >= i else -1
    return out


def _table_from_complex(
    cx: KoszulComplex, i_max: int, j_cap: int | None, label: str
) -> tuple[BettiTable, list[tuple[int, int]]]:
    """Betti numbers for ``i <= i_max`` and ``j <= j_cap`` (default: the proven bounds).

    The table is complete when every row up to N is covered up to its bound
    from :func:`row_bounds`, or when a fully covered row vanishes (then the
    projective dimension is smaller and all later rows vanish too).
    """
    N = cx.N
    bounds = row_bounds(cx.gb)
    slices = []
    entries = {}
    complete = True
    i_hi = min(i_max, N)
    j_hi = 0
    for i in range(0, i_hi + 1):
        top = bounds[i] if j_cap is None else min(bounds[i], j_cap)
        covered = j_cap is None or j_cap >= bounds[i]
        row_zero = True
        for j in range(i, top + 1):
            slices.append((i, j))
            j_hi = max(j_hi, j)
            b = cx.betti(i, j)
            if b:
                entries[(i, j)] = b
                row_zero = False
        if not covered:
            complete = False
        elif row_zero and i > 0 and complete:
            break
    else:
        if i_hi < N:
            complete = False
    table = BettiTable(
        entries,
        i_max=i_hi,
        j_max=j_hi if j_cap is None else j_cap,
        truncated=not complete,
        field=cx.field.label,
        method=label,
    )
    return table, slices


def _artinian_hf(hs) -> list[int]:
    r = hs.reduced()
    return list(r.numerator) if r.denominator_exponent == 0 else []


def compute_betti(
    gb: GroebnerBasis,
    *,
    method: str = "auto",
    i_max: int | None = None,
    j_cap: int | None = None,
    max_dim: int | None = DEFAULT_MAX_DIM,
    caps: Caps | None = None,
) -> BettiComputation:
    """Betti table of R/I.

    ``method``: ``"direct"`` uses the Koszul complex on all N variables;
    ``"reduced"`` first cuts by a verified regular sequence of linear forms;
    ``"auto"`` picks ``direct`` when every slice fits in ``max_dim`` and the
    reduction otherwise.
    """
    if method not in ("auto", "direct", "reduced"):
        raise ValueError(f"unknown Betti method {method!r}")
    N = gb.nvars
    if i_max is None:
        i_max = N
    if method == "auto":
        method = "direct" if _fits(gb, i_max, j_cap, max_dim) else "reduced"
    reduction = None
    if method == "reduced":
        reduction = verified_reduction(gb, caps=caps)
    if reduction is None:
        cx = KoszulComplex(gb, max_dim)
        table, slices = _table_from_complex(cx, i_max, j_cap, "direct")
    else:
        cx = KoszulComplex(reduction.gb, max_dim)
        table, slices = _table_from_complex(cx, i_max, j_cap, f"reduced-by-{reduction.K}-linear-forms")
    return BettiComputation(table, cx, reduction, slices)


def _fits(gb: GroebnerBasis, i_max: int, j_cap: int | None, max_dim: int | None) -> bool:
    """Whether every slice the direct computation would touch stays within ``max_dim``."""
    if max_dim is None:
        return True
    hs = hilbert_series(initial_ideal(gb))
    N = gb.nvars
    bounds = row_bounds(gb)
    for i in range(0, min(i_max, N) + 2):
        # the rank of d_{i+1} is needed for row i
        top = bounds[min(i, N)] if j_cap is None else min(bounds[min(i, N)], j_cap)
        for j in range(i, top + 1):
            if comb(N, i) * hs.coefficient(j - i) > max_dim:
                return False
    return True


def betti_table(gb: GroebnerBasis, **kwargs) -> BettiTable:
    return compute_betti(gb, **kwargs).table


@dataclass(frozen=True)
class RegularityReport:
    value: int | None
    exact: bool
    table: BettiTable

    def __str__(self):
        if self.value is None:
            return "reg undefined (zero module)"
        return f"reg(R/I) = {self.value}" + ("" if self.exact else " (lower bound: table truncated)")


def regularity(gb: GroebnerBasis, i_max: int | None = None, j_cap: int | None = None, **kwargs) -> RegularityReport:
    """``reg(R/I) = max(j - i)`` over nonzero Betti numbers, with exactness flag."""
    table = betti_table(gb, i_max=i_max, j_cap=j_cap, **kwargs)
    return RegularityReport(table.regularity, not table.truncated, table)


def euler_matches_hilbert(gb: GroebnerBasis, table: BettiTable) -> bool:
    """``sum_i (-1)^i beta_{i,j}`` equals the t^j coefficient of HS(R/I)*(1-t)^N."""
    if table.truncated:
        raise ValueError("Euler check against the Hilbert numerator needs a complete table")
    num = hilbert_series(initial_ideal(gb)).numerator
    js = {j for (_, j) in table.entries} | set(range(len(num)))
    for j in js:
        alt = sum((-1) ** i * b for (i, jj), b in table.entries.items() if jj == j)
        if alt != (num[j] if j < len(num) else 0):
            return False
    return True
