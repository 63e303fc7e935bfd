import random
from math import ceil

import pytest
import sympy
from hypothesis import given, strategies as st

from quadreg import FieldSpec, Frame, PolyRing
from quadreg.family import FamilySpec, generator, sequence_F
from quadreg.poly import specialize
from quadreg.strength import (
    BudgetExceeded,
    QuadricForm,
    collective_strength_exact,
    collective_strength_family,
    collective_strength_sampled,
    diagonalize,
    gram_matrix,
    kronecker_with_identity,
    quadric_strength,
    strength_value,
)
from strategies import polys

GF101 = FieldSpec(101)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 12, 20])
def test_generator_ranks_against_sympy(n):
    spec = FamilySpec(n, 2)
    for (i, j), expected in (((1, 1), n), ((1, 2), 2 * n)):
        G = gram_matrix(generator(spec, i, j))
        M = sympy.Matrix([[sympy.Rational(int(v.numerator), int(v.denominator)) for v in row] for row in G.gram])
        assert M.rank() == expected == G.rank()


def test_strength_examples():
    R = PolyRing(Frame(1, 3))
    x, y, z = (R.var(1, t) for t in (1, 2, 3))
    assert strength_value(x * x) == 0
    assert strength_value(x * y) == 0
    assert strength_value(x * x + y * y + z * z) == 1
    with pytest.raises(ValueError):
        quadric_strength(R.zero())
    with pytest.raises(ValueError):
        quadric_strength(x ** 3)


@given(st.data())
def test_gram_round_trip(data):
    R = PolyRing(Frame(2, 2), data.draw(st.sampled_from([FieldSpec(0), FieldSpec(7), FieldSpec(101)])))
    q = data.draw(polys(R, max_terms=6, homogeneous=2))
    G = gram_matrix(q)
    assert G.is_symmetric()
    assert G.to_polynomial() == q


@given(st.data())
def test_diagonalization_reconstructs_the_form(data):
    fld = data.draw(st.sampled_from([FieldSpec(0), FieldSpec(101)]))
    R = PolyRing(Frame(2, 2), fld)
    q = data.draw(polys(R, max_terms=6, homogeneous=2))
    total = R.zero()
    parts = diagonalize(gram_matrix(q))
    for d, L in parts:
        lf = R.zero()
        for k, c in enumerate(L):
            if c:
                s, t = R.frame.position(k)
                lf = lf + R.var(s, t).scale(c)
        total = total + (lf * lf).scale(d)
    assert total == q
    assert len(parts) == gram_matrix(q).rank()


@given(st.data())
def test_witness_multiplies_out_over_prime_fields(data):
    R = PolyRing(Frame(3, 1), data.draw(st.sampled_from([FieldSpec(3), FieldSpec(7), FieldSpec(101)])))
    q = data.draw(polys(R, max_terms=6, homogeneous=2))
    if q.is_zero():
        return
    rep = quadric_strength(q)
    if rep.witness is None:
        # only an anisotropic binary form fails to split over GF(p); the
        # strength value is still the rank formula, valid after field extension
        assert rep.rank == 2 and "no decomposition" in rep.note
        return
    assert rep.witness_sum() == q
    assert len(rep.witness) == rep.strength + 1


def test_rational_witness_when_it_exists():
    spec = FamilySpec(4, 2)
    rep = quadric_strength(generator(spec, 1, 2))
    assert rep.witness_sum() == generator(spec, 1, 2)
    assert len(rep.witness) == rep.strength + 1 == 4
    # x^2 + y^2 has no rational linear factors
    rep = quadric_strength(generator(FamilySpec(2, 1), 1, 1))
    assert rep.witness is None and "no decomposition" in rep.note


def test_strength_drops_under_specialization():
    rng = random.Random(3)
    spec = FamilySpec(4, 3, 2, GF101)
    F = sequence_F(spec)
    for _ in range(50):
        q = spec.ring.zero()
        for f in F:
            q = q + f.scale(rng.randrange(101))
        if q.is_zero():
            continue
        for keep in ({1}, {2, 3}, {1, 3}):
            qt = specialize(q, keep)
            if not qt.is_zero():
                assert strength_value(qt) <= strength_value(q)


def test_kronecker_structure_on_random_combinations():
    rng = random.Random(11)
    for n, m in [(2, 2), (3, 3), (5, 2)]:
        spec = FamilySpec(n, m)
        fld = spec.field
        pairs = [(i, j) for i in range(1, m + 1) for j in range(i, m + 1)]
        for _ in range(10):
            alpha = [rng.randint(-4, 4) for _ in pairs]
            q = spec.ring.zero()
            A = [[fld.zero] * m for _ in range(m)]
            for a, (i, j), f in zip(alpha, pairs, sequence_F(spec)):
                q = q + f.scale(a)
                if i == j:
                    A[i - 1][i - 1] = fld(a)
                else:
                    A[i - 1][j - 1] = A[j - 1][i - 1] = fld(a) / 2
            if q.is_zero():
                continue
            G = gram_matrix(q)
            assert [list(r) for r in G.gram] == kronecker_with_identity(A, n)
            rank_A = sympy.Matrix([[sympy.Rational(int(v.numerator), int(v.denominator)) for v in r] for r in A]).rank()
            assert G.rank() == n * rank_A


def test_collective_strength_examples():
    R = PolyRing(Frame(1, 2), GF101)
    x, y = R.var(1, 1), R.var(1, 2)
    assert collective_strength_exact([x * x, y * y]) == 0
    assert collective_strength_exact(sequence_F(FamilySpec(2, 2, 2, GF101))) == 0
    assert collective_strength_exact(sequence_F(FamilySpec(4, 2, 2, GF101))) == 1
    assert collective_strength_sampled([x * x], 1) == 0


def test_sampled_is_an_upper_bound():
    F = sequence_F(FamilySpec(4, 2, 2, GF101))
    exact = collective_strength_exact(F)
    for seed in range(3):
        assert collective_strength_sampled(F, 50, seed) >= exact
    assert collective_strength_sampled(F, 10_000, 0) == exact


def test_exhaustive_budget_guard():
    F = sequence_F(FamilySpec(2, 4, 2, GF101))  # 10 quadrics: 101^10 points
    with pytest.raises(BudgetExceeded):
        collective_strength_exact(F)
    with pytest.raises(ValueError):
        collective_strength_exact(sequence_F(FamilySpec(2, 2)))


@pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (4, 2), (5, 3), (6, 4)])
def test_family_collective_strength(n, m):
    rep = collective_strength_family(n, m)
    assert rep.value == ceil(n / 2) - 1
    assert rep.verified, rep.checks


def test_family_value_matches_exhaustive_search():
    assert collective_strength_exact(sequence_F(FamilySpec(5, 2, 2, GF101))) == collective_strength_family(5, 2).value
    F53 = sequence_F(FamilySpec(5, 3, 2, GF101))
    try:
        value = collective_strength_exact(F53)
    except BudgetExceeded:
        value = collective_strength_sampled(F53, 20_000, 0)
    assert value == 2
