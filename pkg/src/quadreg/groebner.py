"""Buchberger's algorithm, normal forms and initial ideals.

The engine works on *encoded* monomials (see :meth:`MonomialOrder.encode`):
the encoding turns the monomial order into plain tuple comparison with the
leading monomial smallest, so a binary min-heap pops terms in descending
order, and monomial multiplication stays componentwise addition.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field as dc_field
from operator import add, sub
from typing import Iterable, Sequence

from .poly import Monomial, MonomialOrder, PolyRing, Polynomial, FrameError

log = logging.getLogger(__name__)


class ResourceCapExceeded(RuntimeError):
    """A configured limit (pair count, degree, matrix size) was hit."""


@dataclass
class Caps:
    max_pairs: int | None = 2_000_000
    max_degree: int | None = None


class _Elem:
    __slots__ = ("lead", "exps", "mask", "tail", "sugar", "deg")

    def __init__(self, terms, sugar, exps_of):
        # terms: descending list of (enc, coeff) with a monic leading term
        self.lead = terms[0][0]
        self.exps = exps_of(self.lead)
        self.mask = _mask(self.exps)
        self.tail = terms[1:]
        self.sugar = sugar
        self.deg = sum(self.exps)

    def terms(self):
        return [(self.lead, 1)] + self.tail


def _mask(exps) -> int:
    m = 0
    for k, e in enumerate(exps):
        if e:
            m |= 1 << k
    return m


class Reducer:
    """Multivariate division by a growing list of monic polynomials."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.order = ring.order
        self.p = ring.field.characteristic
        if ring.order.kind == "grevlex":
            self.exps_of = lambda enc: enc[1:]
            self.enc_of = lambda ex: (-sum(ex),) + tuple(ex)
        else:
            self.exps_of = lambda enc: tuple(-x for x in enc)
            self.enc_of = lambda ex: tuple(-x for x in ex)
        self.elems: list[_Elem] = []
        self._cache: dict = {}

    def add(self, elem: _Elem) -> int:
        self.elems.append(elem)
        return len(self.elems) - 1

    def find(self, mono):
        """First element whose leading monomial divides ``mono``, or None."""
        entry = self._cache.get(mono)
        elems = self.elems
        if entry is not None:
            r, upto, bm = entry
            if r is not None:
                return r
            if upto == len(elems):
                return None
            ex = self.exps_of(mono)
        else:
            upto = 0
            ex = self.exps_of(mono)
            bm = _mask(ex)
        for idx in range(upto, len(elems)):
            g = elems[idx]
            if g.mask & ~bm:
                continue
            for a, b in zip(g.exps, ex):
                if a > b:
                    break
            else:
                self._cache[mono] = (g, idx, bm)
                return g
        self._cache[mono] = (None, len(elems), bm)
        return None

    def reduce(self, data: dict, full: bool = True) -> list:
        """Reduce ``data`` (encoded monomial -> coefficient); consumes ``data``.

        Returns the remainder as a descending list of terms.  With
        ``full=False`` only the leading term is reduced (the rest is appended
        unreduced once an irreducible leading term appears).
        """
        p = self.p
        heap = list(data)
        heapq.heapify(heap)
        pop, push = heapq.heappop, heapq.heappush
        find = self.find
        rem = []
        while heap:
            mono = pop(heap)
            c = data.pop(mono, None)
            if c is None:
                continue
            g = find(mono)
            if g is None:
                rem.append((mono, c))
                if not full:
                    rest = sorted(data.items())
                    rem.extend(rest)
                    return rem
                continue
            shift = tuple(map(sub, mono, g.lead))
            if p:
                for gm, gc in g.tail:
                    mm = tuple(map(add, gm, shift))
                    v = data.get(mm)
                    if v is None:
                        data[mm] = (-c * gc) % p
                        push(heap, mm)
                    else:
                        v = (v - c * gc) % p
                        if v:
                            data[mm] = v
                        else:
                            del data[mm]
            else:
                for gm, gc in g.tail:
                    mm = tuple(map(add, gm, shift))
                    v = data.get(mm)
                    if v is None:
                        data[mm] = -c * gc
                        push(heap, mm)
                    else:
                        v = v - c * gc
                        if v:
                            data[mm] = v
                        else:
                            del data[mm]
        return rem

    def make_monic(self, terms: list) -> list:
        lc = terms[0][1]
        if lc == 1:
            return terms
        p = self.p
        if p:
            inv = pow(lc, -1, p)
            return [(m, c * inv % p) for m, c in terms]
        inv = 1 / lc
        return [(m, c * inv) for m, c in terms]

    def encode(self, poly: Polynomial) -> dict:
        enc = self.order.encode
        return {enc(m): c for m, c in poly.coefficients().items()}

    def decode(self, terms: Iterable) -> Polynomial:
        dec = self.order.decode
        return Polynomial(self.ring, {dec(m): c for m, c in terms}, _clean=True)


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators (an antichain)."""

    generators: tuple[Monomial, ...]
    nvars: int

    @classmethod
    def from_monomials(cls, monos: Iterable[Monomial], nvars: int) -> "MonomialIdeal":
        return cls(tuple(minimalize(monos)), nvars)

    def contains(self, mono: Monomial) -> bool:
        return any(divides(g, mono) for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def is_zero(self) -> bool:
        return not self.generators


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimalize(monos: Iterable[Monomial]) -> list[Monomial]:
    """Minimal elements under divisibility, sorted by (degree, exponents)."""
    uniq = sorted(set(tuple(m) for m in monos), key=lambda m: (sum(m), m))
    out: list[Monomial] = []
    for m in uniq:
        if not any(divides(g, m) for g in out):
            out.append(m)
    return out


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced, monic Groebner basis of ``ideal(source)``.

    ``complete`` is False for degree-truncated runs: the basis is then only
    guaranteed correct up to ``degree_bound`` (for homogeneous input).
    """

    generators: tuple[Polynomial, ...]
    ring: PolyRing
    source: tuple[Polynomial, ...]
    complete: bool = True
    degree_bound: int | None = None
    stats: dict = dc_field(default_factory=dict, compare=False)

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    @property
    def field(self):
        return self.ring.field

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial for g in self.generators]

    def reducer(self) -> Reducer:
        red = self.__dict__.get("_reducer")
        if red is None:
            red = Reducer(self.ring)
            for g in self.generators:
                terms = [(self.order.encode(m), c) for m, c in g.terms]
                red.add(_Elem(terms, sum(g.leading_monomial), red.exps_of))
            object.__setattr__(self, "_reducer", red)
        return red

    def normal_form(self, p: Polynomial) -> Polynomial:
        red = self.reducer()
        if p.ring.frame != self.ring.frame or p.ring.field != self.ring.field:
            raise FrameError("polynomial and basis live in different rings")
        return red.decode(red.reduce(red.encode(p)))

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def is_unit_ideal(self) -> bool:
        return any(g.total_degree() == 0 for g in self.generators)

    def __len__(self):
        return len(self.generators)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    """``(L/lt(f))*f - (L/lt(g))*g`` with ``L`` the lcm of the leading monomials."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    f._check(g)
    if order is not None and order != f.ring.order:
        ring = f.ring.with_order(order)
        f, g = f.with_ring(ring), g.with_ring(ring)
    ring = f.ring
    fld = ring.field
    lf, lg = f.leading_monomial, g.leading_monomial
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    uf = tuple(a - b for a, b in zip(lcm, lf))
    ug = tuple(a - b for a, b in zip(lcm, lg))
    a = f.mul_monomial(uf, fld.inv(f.leading_coefficient))
    b = g.mul_monomial(ug, fld.inv(g.leading_coefficient))
    return a - b


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder | None = None) -> Polynomial:
    """Fully reduce ``p`` by ``basis`` (any list of nonzero polynomials)."""
    ring = p.ring if order is None else p.ring.with_order(order)
    red = Reducer(ring)
    for b in basis:
        if b.is_zero():
            raise ValueError("normal form with respect to a zero polynomial")
        b = b.with_ring(ring)
        terms = red.make_monic([(ring.order.encode(m), c) for m, c in b.terms])
        red.add(_Elem(terms, b.total_degree(), red.exps_of))
    out = red.reduce({ring.order.encode(m): c for m, c in p.coefficients().items()})
    return red.decode(out)


class _Buchberger:
    def __init__(self, ring: PolyRing, caps: Caps, degree_bound: int | None):
        self.ring = ring
        self.caps = caps
        self.degree_bound = degree_bound
        self.red = Reducer(ring)
        self.exps_of = self.red.exps_of
        self.enc_of = self.red.enc_of
        self.active: list[int] = []
        self.pairs: dict = {}
        self.heap: list = []
        self.deferred = 0
        self.stats = {"pairs_reduced": 0, "zero_reductions": 0, "max_degree": 0, "pairs_skipped_degree": 0}

    def _pair(self, i: int, j: int):
        E = self.red.elems
        gi, gj = E[i], E[j]
        lcm = tuple(map(max, gi.exps, gj.exps))
        d = sum(lcm)
        sugar = max(gi.sugar - gi.deg, gj.sugar - gj.deg) + d
        return (d, sugar, self.enc_of(lcm), i, j), lcm

    def update(self, h_idx: int):
        """Gebauer-Moeller installation of a new basis element."""
        E = self.red.elems
        h = E[h_idx]
        hex_, hmask = h.exps, h.mask
        C = []
        for g_idx in self.active:
            key, lcm = self._pair(h_idx, g_idx)
            C.append((key, lcm, not (E[g_idx].mask & hmask)))
        D = []
        while C:
            key, lcm, coprime = C.pop(0)
            if coprime or not (
                any(divides(q[1], lcm) for q in C) or any(divides(q[1], lcm) for q in D)
            ):
                D.append((key, lcm, coprime))
        new_pairs = [key for key, _, coprime in D if not coprime]
        # prune old pairs (Buchberger's chain criterion "B")
        for pk, (key, lcm) in list(self.pairs.items()):
            i, j = pk
            if not divides(hex_, lcm):
                continue
            lih = tuple(map(max, E[i].exps, hex_))
            ljh = tuple(map(max, E[j].exps, hex_))
            if lih != lcm and ljh != lcm:
                del self.pairs[pk]
        for key in new_pairs:
            d, s, lenc, i, j = key
            pk = (min(i, j), max(i, j))
            key = (d, s, lenc) + pk
            lcm = self.exps_of(lenc)
            self.pairs[pk] = (key, lcm)
            heapq.heappush(self.heap, key)
        self.active = [g for g in self.active if not divides(hex_, E[g].exps)]
        self.active.append(h_idx)

    def insert(self, terms: list, sugar: int):
        terms = self.red.make_monic(terms)
        idx = self.red.add(_Elem(terms, sugar, self.exps_of))
        self.update(idx)
        self.stats["max_degree"] = max(self.stats["max_degree"], self.red.elems[idx].deg)

    def spoly(self, i: int, j: int, lcm) -> dict:
        E = self.red.elems
        p = self.red.p
        lenc = self.enc_of(lcm)
        data: dict = {}
        for g, sign in ((E[i], 1), (E[j], -1)):
            shift = tuple(map(sub, lenc, g.lead))
            for gm, gc in g.tail:
                mm = tuple(map(add, gm, shift))
                v = data.get(mm, 0) + sign * gc
                if p:
                    v %= p
                if v:
                    data[mm] = v
                else:
                    data.pop(mm, None)
        return data

    def run(self, gens: Sequence[Polynomial]):
        red = self.red
        polys = []
        for g in gens:
            if g.is_zero():
                continue
            polys.append(g)
        # insert generators in increasing degree, each reduced by the previous ones
        polys.sort(key=lambda f: (f.total_degree(), self.ring.order.key(f.leading_monomial)))
        for f in polys:
            rem = red.reduce(red.encode(f))
            if rem:
                self.insert(rem, f.total_degree())
        caps = self.caps
        while self.heap:
            key = heapq.heappop(self.heap)
            pk = key[3:]
            entry = self.pairs.get(pk)
            if entry is None or entry[0] != key:
                continue
            d = key[0]
            if self.degree_bound is not None and d > self.degree_bound:
                # keep remaining pairs unprocessed: truncated basis
                self.deferred = sum(1 for k in self.pairs.values() if k[0][0] > self.degree_bound)
                self.stats["pairs_skipped_degree"] = self.deferred
                break
            del self.pairs[pk]
            if caps.max_degree is not None and d > caps.max_degree:
                raise ResourceCapExceeded(f"S-pair degree {d} exceeds max_degree={caps.max_degree}")
            self.stats["pairs_reduced"] += 1
            if caps.max_pairs is not None and self.stats["pairs_reduced"] > caps.max_pairs:
                raise ResourceCapExceeded(f"more than max_pairs={caps.max_pairs} S-pairs reduced")
            rem = red.reduce(self.spoly(pk[0], pk[1], entry[1]))
            if rem:
                self.insert(rem, key[1])
            else:
                self.stats["zero_reductions"] += 1

    def reduced_basis(self) -> list[list]:
        red = self.red
        out = []
        for idx in self.active:
            g = red.elems[idx]
            tail = red.reduce(dict(g.tail))
            out.append([(g.lead, 1)] + tail)
        out.sort(key=lambda t: t[0][0])
        return out


def buchberger(
    gens: Sequence[Polynomial],
    order: MonomialOrder | None = None,
    *,
    caps: Caps | None = None,
    degree_bound: int | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal(gens)``.

    Pairs are processed by the normal strategy (smallest lcm degree first,
    sugar as tie-break) with the Gebauer-Moeller criteria.  ``degree_bound``
    stops after all pairs up to that degree; for homogeneous input the result
    is then a Groebner basis up to that degree and is flagged incomplete.
    """
    if not gens:
        raise ValueError("buchberger needs at least one generator (possibly zero)")
    ring = gens[0].ring
    for g in gens[1:]:
        if g.ring.frame != ring.frame or g.ring.field != ring.field:
            raise FrameError("generators live in different frames or fields")
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
    gens = [g.with_ring(ring) for g in gens]
    engine = _Buchberger(ring, caps or Caps(), degree_bound)
    engine.run(gens)
    basis = [engine.red.decode(t) for t in engine.reduced_basis()]
    complete = engine.deferred == 0
    engine.stats["basis_size"] = len(basis)
    log.debug("buchberger: %s", engine.stats)
    return GroebnerBasis(
        tuple(basis),
        ring,
        tuple(gens),
        complete=complete,
        degree_bound=None if complete else degree_bound,
        stats=dict(engine.stats),
    )


def initial_ideal(gb: GroebnerBasis) -> MonomialIdeal:
    return MonomialIdeal.from_monomials(gb.leading_monomials(), gb.nvars)
