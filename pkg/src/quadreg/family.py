"""The equivariant quadric family and the sweep for the largest regular m.

``f_{n,i,j} = sum_s x[s,i] * x[s,j]`` lives in the ring on the n x m frame.
``F_{n,m}`` lists these for ``1 <= i <= j <= m``; the sweep finds the
largest ``m`` for which ``F_{n,m}`` is a regular sequence.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from math import ceil, comb
from typing import Sequence

from .field import DEFAULT_PRIME, FieldSpec, QQ
from .groebner import Caps, ResourceCapExceeded, buchberger
from .invariants import hilbert_ci_check, is_regular_sequence
from .linalg import rank as sparse_rank
from .poly import Frame, PolyRing, Polynomial

log = logging.getLogger(__name__)

MODES = ("heuristic", "certified", "combined")


@dataclass(frozen=True)
class FamilySpec:
    n: int
    m: int
    d: int = 2
    field: FieldSpec = QQ

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n, m >= 1 (got n={self.n}, m={self.m})")
        if self.d < 2:
            raise ValueError(f"generator degree must be >= 2 (got {self.d})")

    @property
    def ring(self) -> PolyRing:
        return PolyRing(Frame(self.n, self.m), self.field)

    @property
    def generator_count(self) -> int:
        return comb(self.m + self.d - 1, self.d)


def _column_product(spec: FamilySpec, cols: Sequence[int]) -> Polynomial:
    """``sum_s prod_k x[s, cols[k]]``."""
    ring = spec.ring
    frame = ring.frame
    data = {}
    for s in range(1, spec.n + 1):
        mono = [0] * frame.nvars
        for t in cols:
            mono[frame.index(s, t)] += 1
        data[tuple(mono)] = ring.field.one
    return Polynomial(ring, data)


def generator(spec: FamilySpec, i: int, j: int) -> Polynomial:
    if spec.d != 2:
        raise ValueError("generator(i, j) is the quadric case; use orbit_generators for d > 2")
    if not 1 <= i <= j <= spec.m:
        raise IndexError(f"need 1 <= i <= j <= {spec.m}, got ({i}, {j})")
    return _column_product(spec, (i, j))


def sequence_F(spec: FamilySpec) -> list[Polynomial]:
    """``f_{n,1,1}, f_{n,1,2}, ..., f_{n,m,m}`` in lexicographic (i, j) order."""
    if spec.d != 2:
        raise ValueError("sequence_F is defined for quadrics")
    return [generator(spec, i, j) for i in range(1, spec.m + 1) for j in range(i, spec.m + 1)]


def generator_power_sum(spec: FamilySpec) -> Polynomial:
    """``x[1,1]^d + ... + x[n,1]^d``."""
    return _column_product(spec, (1,) * spec.d)


def orbit_generators(spec: FamilySpec) -> list[Polynomial]:
    """Polarizations of the power sum, one per multiset of ``d`` columns.

    For ``d = 2`` this is ``sequence_F``.  For larger ``d`` it spans the
    degree-``d`` part of the equivariant ideal; minimality is not claimed.
    """
    return [
        _column_product(spec, cols)
        for cols in itertools.combinations_with_replacement(range(1, spec.m + 1), spec.d)
    ]


def substitute_columns(p: Polynomial, matrix: Sequence[Sequence]) -> Polynomial:
    """Apply ``x[s,t] -> sum_u matrix[u][t] x[s,u]`` (a column change of basis)."""
    ring = p.ring
    frame = ring.frame
    fld = ring.field
    images = []
    for k in range(frame.nvars):
        s, t = frame.position(k)
        img = ring.zero()
        for u in range(1, frame.m + 1):
            c = fld(matrix[u - 1][t - 1])
            if c:
                img = img + ring.var(s, u).scale(c)
        images.append(img)
    out = ring.zero()
    for mono, c in p.terms:
        term = ring.constant(c)
        for k, e in enumerate(mono):
            if e:
                term = term * images[k] ** e
        out = out + term
    return out


def in_span(q: Polynomial, basis: Sequence[Polynomial]) -> bool:
    """Whether ``q`` is a linear combination of ``basis``."""
    fld = q.ring.field
    cols: dict = {}

    def row(p):
        return {cols.setdefault(m, len(cols)): c for m, c in p.terms}

    rows = [row(b) for b in basis]
    r0 = sparse_rank(rows, fld)
    return sparse_rank(rows + [row(q)], fld) == r0


# -- the sweep --

@dataclass(frozen=True)
class Cell:
    m: int
    verdict: str
    codim: int
    expected: int
    hilbert_ci: bool
    field: str
    status: str

    @property
    def regular(self) -> bool:
        return self.verdict == "regular"

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "verdict": self.verdict,
            "codim": self.codim,
            "expected": self.expected,
            "hilbert_ci": self.hilbert_ci,
            "field": self.field,
            "status": self.status,
        }


@dataclass
class GTableRow:
    n: int
    g: int
    lower_bound: int
    upper_bound: int
    cells: list[Cell] = dc_field(default_factory=list)
    exact: bool = False
    incomplete_from: int | None = None
    screening: list[Cell] = dc_field(default_factory=list)  # GF(p) pass of a combined sweep

    @property
    def complete(self) -> bool:
        return self.incomplete_from is None

    def bounds_hold(self) -> bool:
        return self.lower_bound <= self.g <= self.upper_bound

    def monotone(self) -> bool:
        seen_fail = False
        for c in sorted(self.cells, key=lambda c: c.m):
            if c.regular and seen_fail:
                return False
            seen_fail |= not c.regular
        return True

    def oracles_agree(self) -> bool:
        return all(c.regular == c.hilbert_ci for c in self.cells + self.screening)

    def fields_agree(self) -> bool:
        """In a combined sweep, whether GF(p) and QQ verdicts coincide cell by cell."""
        qq = {c.m: c.regular for c in self.cells}
        return all(qq.get(c.m, c.regular) == c.regular for c in self.screening)

    def describe_g(self) -> str:
        return str(self.g) if self.exact else f">={self.g}"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "g_exact": self.exact,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "incomplete_from": self.incomplete_from,
            "cells": [c.to_dict() for c in self.cells],
            "screening": [c.to_dict() for c in self.screening],
        }


def mode_field(mode: str, p: int = DEFAULT_PRIME) -> FieldSpec:
    if mode in ("certified", "combined"):
        return QQ
    if mode == "heuristic":
        return FieldSpec(p)
    raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")


def check_cell(n: int, m: int, characteristic: int, caps: Caps | None = None) -> Cell:
    """Regular-sequence verdict for F_{n,m}, with the Hilbert-series oracle."""
    spec = FamilySpec(n, m, 2, FieldSpec(characteristic))
    F = sequence_F(spec)
    gb = buchberger(F, caps=caps)
    cert = is_regular_sequence(F, gb=gb)
    return Cell(m, cert.verdict, cert.codim, cert.expected, hilbert_ci_check(F, gb=gb), cert.field, cert.status)


def g_sweep(
    n: int,
    m_max: int | None = None,
    mode: str = "heuristic",
    p: int = DEFAULT_PRIME,
    *,
    early_exit: bool = True,
    caps: Caps | None = None,
    threads: int = 1,
) -> GTableRow:
    """Largest ``m <= m_max`` with F_{n,m} regular.

    Past ``2n - 1`` the ideal cannot be a complete intersection
    (``C(m+1,2) > n*m`` variables' worth of codimension), so ``g`` is exact
    once a failure is seen or when every ``m <= 2n - 1`` is regular.
    ``mode="combined"`` screens over GF(p) and then confirms every screened
    cell over QQ; the reported verdicts are the QQ ones.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode == "combined":
        screen = g_sweep(n, m_max, "heuristic", p, early_exit=early_exit, caps=caps, threads=threads)
        top = max((c.m for c in screen.cells), default=1)
        row = g_sweep(n, top, "certified", p, early_exit=early_exit, caps=caps, threads=threads)
        row.screening = screen.cells
        if row.complete and not screen.complete:
            row.incomplete_from = screen.incomplete_from
            row.exact = any(not c.regular for c in row.cells)
        return row
    upper = 2 * n - 1
    if m_max is None:
        m_max = upper
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    fld = mode_field(mode, p)
    row = GTableRow(n=n, g=0, lower_bound=n // 2, upper_bound=upper)
    ms = list(range(1, m_max + 1))
    if early_exit or threads <= 1:
        for m in ms:
            try:
                cell = check_cell(n, m, fld.characteristic, caps)
            except ResourceCapExceeded as exc:
                log.warning("n=%d m=%d: %s", n, m, exc)
                row.incomplete_from = m
                break
            row.cells.append(cell)
            log.info("n=%d m=%d %s codim=%d/%d", n, m, cell.verdict, cell.codim, cell.expected)
            if not cell.regular and early_exit:
                break
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(check_cell, n, m, fld.characteristic, caps) for m in ms]
            for m, fut in zip(ms, futures):
                try:
                    row.cells.append(fut.result())
                except ResourceCapExceeded as exc:
                    log.warning("n=%d m=%d: %s", n, m, exc)
                    row.incomplete_from = m
                    break
    g = 0
    for c in row.cells:
        if not c.regular:
            break
        g = c.m
    row.g = g
    failed = any(not c.regular for c in row.cells)
    row.exact = failed or (g >= upper and row.complete)
    return row


# -- composite check --

@dataclass
class TheoremReport:
    n: int
    mode: str
    g: int
    g_exact: bool
    generators: int
    checks: dict[str, bool] = dc_field(default_factory=dict)
    details: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "g": self.g,
            "g_exact": self.g_exact,
            "generators": self.generators,
            "checks": dict(self.checks),
            "details": self.details,
            "passed": self.passed,
        }


def verify_theorem(
    n: int,
    mode: str = "certified",
    p: int = DEFAULT_PRIME,
    *,
    caps: Caps | None = None,
    strength_prime: int = 101,
    samples: int = 2000,
    seed: int = 0,
) -> TheoremReport:
    """Run the sweep for ``n`` and check everything claimed about F_{n,g}.

    (a) F_{n,g} is regular, (b) it has C(g+1,2) elements, (c) its Betti
    table is the Koszul table of c quadrics, (d) reg(R/I) = c and
    (e) its collective strength is ``ceil(n/2) - 1``.  The Koszul
    differentials are also checked to square to zero and the alternating
    Betti sums against the Hilbert numerator.
    """
    from .koszul import ci_betti_analytic, compute_betti, euler_matches_hilbert
    from .strength import (
        BudgetExceeded,
        collective_strength_exact,
        collective_strength_family,
        collective_strength_sampled,
    )

    row = g_sweep(n, mode=mode, p=p, caps=caps)
    g = row.g
    fld = mode_field(mode, p)
    spec = FamilySpec(n, g, 2, fld)
    F = sequence_F(spec)
    c = len(F)
    report = TheoremReport(n, mode, g, row.exact, c)
    report.details["sweep"] = row.to_dict()
    checks = report.checks
    checks["g within bounds"] = row.bounds_hold()
    checks["verdicts monotone"] = row.monotone()
    checks["codim and Hilbert oracles agree"] = row.oracles_agree()

    gb = buchberger(F, caps=caps)
    cert = is_regular_sequence(F, gb=gb)
    checks["(a) F_{n,g} regular"] = cert.regular
    checks["(b) C(g+1,2) generators"] = c == comb(g + 1, 2)

    comp = compute_betti(gb, caps=caps)
    table = comp.table
    report.details["betti"] = table.to_dict()
    checks["(c) Betti table = complete-intersection table"] = (
        not table.truncated and table.same_entries(ci_betti_analytic(c, 2))
    )
    checks["(d) reg(R/I) = c"] = not table.truncated and table.regularity == c
    checks["d o d = 0"] = all(comp.complex.check_dd_zero(i, j) for i, j in comp.slices)
    checks["Euler characteristic matches Hilbert numerator"] = (
        not table.truncated and euler_matches_hilbert(comp.complex.gb, table)
    )

    target = ceil(n / 2) - 1
    fam = collective_strength_family(n, g, fld)
    report.details["collective_strength_family"] = fam.to_dict()
    small = FamilySpec(n, g, 2, FieldSpec(strength_prime))
    try:
        cs = collective_strength_exact(sequence_F(small))
        how = f"exhaustive over GF({strength_prime})"
    except BudgetExceeded:
        cs = collective_strength_sampled(sequence_F(small), samples, seed)
        how = f"sampled upper bound over GF({strength_prime}), {samples} trials"
    report.details["collective_strength"] = {"value": cs, "method": how}
    checks["(e) collective strength = ceil(n/2) - 1"] = fam.verified and fam.value == target and cs == target
    return report
