"""Strength and collective strength of quadrics.

The strength of a quadric ``Q`` is ``ceil(rank(Q)/2) - 1`` where the rank is
that of its Gram matrix.  This is the value over an algebraically closed
field; over QQ and GF(p) we compute the same number from the (field
independent for rational input) rank, and produce an explicit decomposition
``Q = sum g_i h_i`` only when one exists over the working field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import ceil
from typing import Sequence

from .field import FieldSpec
from .groebner import ResourceCapExceeded
from .linalg import rank as sparse_rank
from .poly import Monomial, PolyRing, Polynomial, linear_form

EXHAUSTIVE_BUDGET = 10**7


class BudgetExceeded(ResourceCapExceeded):
    pass


@dataclass(frozen=True)
class QuadricForm:
    """``Q(x) = x^T G x`` with ``G`` symmetric (off-diagonal = half the mixed coefficient)."""

    gram: tuple[tuple, ...]
    ring: PolyRing

    @property
    def size(self) -> int:
        return len(self.gram)

    def rows(self) -> list[dict]:
        return [{j: v for j, v in enumerate(row) if v} for row in self.gram]

    def rank(self) -> int:
        return sparse_rank(self.rows(), self.ring.field)

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.gram[i][j] == self.gram[j][i] for i in range(n) for j in range(i))

    def to_polynomial(self) -> Polynomial:
        fld = self.ring.field
        N = self.size
        data: dict[Monomial, object] = {}
        for i in range(N):
            for j in range(i, N):
                v = self.gram[i][j]
                if not v:
                    continue
                mono = [0] * N
                mono[i] += 1
                mono[j] += 1
                data[tuple(mono)] = v if i == j else fld.add(v, v)
        return Polynomial(self.ring, data)


def _check_quadric(q: Polynomial):
    if q.ring.field.characteristic == 2:
        raise ValueError("Gram matrices need characteristic != 2")
    if not q.is_zero() and q.homogeneous_degree != 2:
        raise ValueError(f"not a homogeneous quadric: {q}")


def gram_matrix(q: Polynomial) -> QuadricForm:
    _check_quadric(q)
    fld = q.ring.field
    N = q.ring.nvars
    half = fld.inv(fld(2))
    G = [[fld.zero] * N for _ in range(N)]
    for mono, c in q.terms:
        idx = [k for k, e in enumerate(mono) for _ in range(e)]
        i, j = idx
        if i == j:
            G[i][i] = c
        else:
            h = fld.mul(c, half)
            G[i][j] = h
            G[j][i] = h
    return QuadricForm(tuple(tuple(r) for r in G), q.ring)


def diagonalize(form: QuadricForm) -> list[tuple[object, list]]:
    """``Q = sum_k d_k L_k(x)^2`` by Lagrange's method; returns ``[(d_k, L_k coeffs)]``."""
    fld = form.ring.field
    N = form.size
    G = [list(r) for r in form.gram]
    out = []
    while True:
        piv = next((i for i in range(N) if G[i][i]), None)
        if piv is not None:
            v = [fld.zero] * N
            v[piv] = fld.one
        else:
            pair = next(((i, j) for i in range(N) for j in range(i + 1, N) if G[i][j]), None)
            if pair is None:
                break
            v = [fld.zero] * N
            v[pair[0]] = fld.one
            v[pair[1]] = fld.one
        Gv = [fld.zero] * N
        for i in range(N):
            acc = fld.zero
            for j in range(N):
                if v[j] and G[i][j]:
                    acc = fld.add(acc, fld.mul(G[i][j], v[j]))
            Gv[i] = acc
        qv = fld.zero
        for i in range(N):
            if v[i]:
                qv = fld.add(qv, fld.mul(v[i], Gv[i]))
        inv = fld.inv(qv)
        out.append((qv, [fld.mul(g, inv) for g in Gv]))
        for i in range(N):
            if not Gv[i]:
                continue
            a = fld.mul(Gv[i], inv)
            row = G[i]
            for j in range(N):
                if Gv[j]:
                    row[j] = fld.sub(row[j], fld.mul(a, Gv[j]))
    return out


@dataclass(frozen=True)
class StrengthReport:
    strength: int
    rank: int
    witness: tuple[tuple[Polynomial, Polynomial], ...] | None = None
    method: str = "gram-rank"
    field: str = ""
    note: str = ""

    def witness_sum(self) -> Polynomial | None:
        if not self.witness:
            return None
        total = self.witness[0][0] * self.witness[0][1]
        for g, h in self.witness[1:]:
            total = total + g * h
        return total

    def to_dict(self) -> dict:
        return {
            "strength": self.strength,
            "rank": self.rank,
            "method": self.method,
            "field": self.field,
            "witness": None if self.witness is None else [[str(g), str(h)] for g, h in self.witness],
            "note": self.note,
        }


def _lin(ring: PolyRing, coeffs: list) -> Polynomial:
    return linear_form(ring, coeffs)


def _combine(fld: FieldSpec, a: list, b: list, ca=1, cb=1) -> list:
    ca, cb = fld(ca) if isinstance(ca, int) else ca, fld(cb) if isinstance(cb, int) else cb
    return [fld.add(fld.mul(ca, x), fld.mul(cb, y)) for x, y in zip(a, b)]


def _pairable(fld: FieldSpec, da, db):
    """``c`` with ``db = -c^2 da`` if it exists, else None."""
    r = fld.neg(fld.div(db, da))
    return fld.sqrt(r) if fld.is_square(r) else None


def _witness(form: QuadricForm) -> tuple[list | None, str]:
    """Products of linear forms summing to Q, as coefficient-vector pairs."""
    fld = form.ring.field
    pool = diagonalize(form)
    products = []
    while len(pool) >= 2:
        found = None
        for a in range(len(pool)):
            for b in range(a + 1, len(pool)):
                c = _pairable(fld, pool[a][0], pool[b][0])
                if c is not None:
                    found = (a, b, c)
                    break
            if found:
                break
        if found:
            a, b, c = found
            (da, La), (db, Lb) = pool[a], pool[b]
            # da La^2 + db Lb^2 = da (La - c Lb)(La + c Lb)
            g = [fld.mul(da, x) for x in _combine(fld, La, Lb, 1, fld.neg(c))]
            h = _combine(fld, La, Lb, 1, c)
            products.append((g, h))
            pool = [t for k, t in enumerate(pool) if k not in (a, b)]
            continue
        if fld.characteristic and len(pool) >= 3:
            # no pair is hyperbolic: rewrite d1 L1^2 + d2 L2^2 so that one
            # new square pairs with the third term
            (d1, L1), (d2, L2), (d3, L3) = pool[:3]
            t = fld.neg(d3)
            a_b = None
            for a in range(fld.characteristic):
                rhs = fld.div(fld.sub(t, fld.mul(d1, a * a)), d2)
                if fld.is_square(rhs):
                    a_b = (a, fld.sqrt(rhs))
                    break
            a, b = a_b
            tinv = fld.inv(t)
            L1n = [fld.mul(tinv, x) for x in _combine(fld, L1, L2, fld.mul(a, d1), fld.mul(b, d2))]
            L2n = [fld.mul(tinv, x) for x in _combine(fld, L1, L2, fld.neg(b), a)]
            d2n = fld.mul(fld.mul(d1, d2), t)
            pool = [(t, L1n), (d3, L3), (d2n, L2n)] + pool[3:]
            continue
        return None, f"no decomposition into products of linear forms over {fld.label}"
    if pool:
        d, L = pool[0]
        products.append(([fld.mul(d, x) for x in L], L))
    return products, ""


def quadric_strength(q: Polynomial, witness: bool = True) -> StrengthReport:
    """Strength ``ceil(rank/2) - 1`` of a nonzero quadric, with a witness when available."""
    _check_quadric(q)
    if q.is_zero():
        raise ValueError("strength of the zero polynomial is undefined")
    form = gram_matrix(q)
    r = form.rank()
    k = ceil(r / 2) - 1
    wit, note = (None, "")
    if witness:
        vecs, note = _witness(form)
        if vecs is not None:
            wit = tuple((_lin(q.ring, g), _lin(q.ring, h)) for g, h in vecs)
    return StrengthReport(k, r, wit, "gram-rank", q.ring.field.label, note)


def strength_value(q: Polynomial) -> int:
    """Just the strength number (no witness)."""
    return quadric_strength(q, witness=False).strength


# -- collective strength --

def _gram_rows(qs: Sequence[Polynomial]) -> list[list[dict]]:
    return [gram_matrix(q).rows() for q in qs]


def _combo_rank(grams: list[list[dict]], coeffs: Sequence[int], p: int) -> int:
    N = len(grams[0])
    rows = []
    for i in range(N):
        acc: dict = {}
        for a, G in zip(coeffs, grams):
            if a:
                for j, v in G[i].items():
                    acc[j] = (acc.get(j, 0) + a * v) % p
        rows.append({j: v for j, v in acc.items() if v})
    return sparse_rank(rows, FieldSpec(p))


def _projective_points(r: int, p: int):
    """Vectors in GF(p)^r whose first nonzero coordinate is 1."""
    for lead in range(r):
        for tail in range(p ** (r - lead - 1)):
            vec = [0] * lead + [1]
            x = tail
            rest = []
            for _ in range(r - lead - 1):
                rest.append(x % p)
                x //= p
            yield vec + rest[::-1]


def collective_strength_exact(qs: Sequence[Polynomial], budget: int = EXHAUSTIVE_BUDGET) -> int:
    """Minimum strength over all nonzero GF(p)-combinations (exhaustive)."""
    if not qs:
        raise ValueError("empty list of quadrics")
    p = qs[0].ring.field.characteristic
    if not p:
        raise ValueError("exhaustive search needs a prime field")
    r = len(qs)
    points = (p**r - 1) // (p - 1)
    if points > budget:
        raise BudgetExceeded(
            f"{points} projective points exceed the budget {budget}; "
            "use collective_strength_sampled or collective_strength_family"
        )
    grams = _gram_rows(qs)
    best = None
    for vec in _projective_points(r, p):
        rk = _combo_rank(grams, vec, p)
        if rk == 0:
            continue  # the combination vanishes: not a quadric
        s = ceil(rk / 2) - 1
        if best is None or s < best:
            best = s
            if best == 0:
                break
    if best is None:
        raise ValueError("every combination vanishes")
    return best


def collective_strength_sampled(qs: Sequence[Polynomial], trials: int, seed: int = 0) -> int:
    """Upper bound: minimum strength over ``trials`` random nonzero combinations.

    The first ``len(qs)`` trials are the unit vectors, so each listed quadric
    is always among the sampled points.
    """
    p = qs[0].ring.field.characteristic
    if not p:
        raise ValueError("sampling needs a prime field")
    rng = random.Random(seed)
    grams = _gram_rows(qs)
    r = len(qs)
    best = None
    for t in range(trials):
        if t < r:
            vec = [int(k == t) for k in range(r)]
        else:
            vec = [rng.randrange(p) for _ in range(r)]
            if not any(vec):
                continue
        rk = _combo_rank(grams, vec, p)
        if rk == 0:
            continue
        s = ceil(rk / 2) - 1
        if best is None or s < best:
            best = s
    if best is None:
        raise ValueError("no nonzero combination sampled")
    return best


@dataclass
class FamilyStrengthReport:
    """Collective strength of F_{n,m} with the checks that establish it."""

    n: int
    m: int
    value: int
    checks: dict[str, bool] = dc_field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "value": self.value, "checks": dict(self.checks), "verified": self.verified}


def _sym_coeff_matrix(m: int, i: int, j: int, fld: FieldSpec) -> list[list]:
    A = [[fld.zero] * m for _ in range(m)]
    if i == j:
        A[i - 1][i - 1] = fld.one
    else:
        h = fld.inv(fld(2))
        A[i - 1][j - 1] = h
        A[j - 1][i - 1] = h
    return A


def kronecker_with_identity(A: list[list], n: int) -> list[list]:
    """``A (x) I_n`` in the column-major variable order x[s,t] -> (t-1)*n + (s-1)."""
    m = len(A)
    zero = A[0][0] * 0 if m else 0
    out = [[zero] * (m * n) for _ in range(m * n)]
    for t in range(m):
        for u in range(m):
            if A[t][u]:
                for s in range(n):
                    out[t * n + s][u * n + s] = A[t][u]
    return out


def collective_strength_family(
    n: int, m: int, field: FieldSpec | None = None, samples: int = 20, seed: int = 0
) -> FamilyStrengthReport:
    """Collective strength ``ceil(n/2) - 1`` of F_{n,m}, with its derivation checked.

    A combination ``sum alpha_ij f_{n,i,j}`` has Gram matrix ``A (x) I_n`` with
    ``A`` the symmetric coefficient matrix, so its rank is ``n * rank(A) >= n``
    and its strength is at least ``ceil(n/2) - 1``; ``f_{n,1,1}`` attains it.
    The checks confirm the Kronecker identity on every generator and on
    random combinations, the generator ranks, the specialization step
    (setting the columns outside {i} or {i, j} to zero never raises strength)
    and attainment.
    """
    from .family import FamilySpec, generator, sequence_F
    from .poly import specialize

    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    fld = field or FieldSpec(0)
    spec = FamilySpec(n, m, 2, fld)
    value = ceil(n / 2) - 1
    rng = random.Random(seed)
    checks: dict[str, bool] = {}

    kron_ok = ranks_ok = True
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            G = gram_matrix(generator(spec, i, j))
            kron_ok &= [list(r) for r in G.gram] == kronecker_with_identity(_sym_coeff_matrix(m, i, j, fld), n)
            ranks_ok &= G.rank() == (n if i == j else 2 * n)
    checks["gram(f_ij) = sym(E_ij) (x) I_n"] = kron_ok
    checks["rank f_ii = n and rank f_ij = 2n"] = ranks_ok

    F = sequence_F(spec)
    pairs = [(i, j) for i in range(1, m + 1) for j in range(i, m + 1)]
    combo_ok = spec_ok = True
    for _ in range(samples):
        alpha = [fld(rng.randint(-5, 5)) for _ in pairs]
        if not any(alpha):
            continue
        Q = spec.ring.zero()
        for a, f in zip(alpha, F):
            Q = Q + f.scale(a)
        A = [[fld.zero] * m for _ in range(m)]
        half = fld.inv(fld(2))
        for a, (i, j) in zip(alpha, pairs):
            if i == j:
                A[i - 1][i - 1] = a
            else:
                A[i - 1][j - 1] = A[j - 1][i - 1] = fld.mul(a, half)
        G = gram_matrix(Q)
        combo_ok &= [list(r) for r in G.gram] == kronecker_with_identity(A, n)
        rA = sparse_rank([{k: v for k, v in enumerate(row) if v} for row in A], fld)
        combo_ok &= G.rank() == n * rA
        s_Q = ceil(n * rA / 2) - 1
        combo_ok &= s_Q >= value
        # specialization: keep {i} when some alpha_ii != 0, else {i, j}
        diag = [(a, i) for a, (i, j) in zip(alpha, pairs) if i == j and a]
        if diag:
            keep = {diag[0][1]}
        else:
            i, j = next(p for a, p in zip(alpha, pairs) if a)
            keep = {i, j}
        Qt = specialize(Q, keep)
        if not Qt.is_zero():
            spec_ok &= value <= strength_value(Qt) <= s_Q
    checks["gram(sum alpha f) = A (x) I_n, rank = n rank(A)"] = combo_ok
    checks["specialization does not raise strength"] = spec_ok
    checks["attained at f_11"] = strength_value(generator(spec, 1, 1)) == value
    return FamilyStrengthReport(n, m, value, checks)
