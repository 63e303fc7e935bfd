import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from quadreg import Caps, FieldSpec, Frame, PolyRing, ResourceCapExceeded, buchberger, initial_ideal, specialize
from quadreg.family import FamilySpec, sequence_F
from quadreg.koszul import standard_monomials
from quadreg.groebner import MonomialIdeal, normal_form, s_polynomial
from quadreg.poly import MonomialOrder
from oracles import sympy_leading_exponents
from strategies import polys

R2 = PolyRing(Frame(1, 2))
x, y = R2.var(1, 1), R2.var(1, 2)


def test_s_polynomial_examples():
    f = x * x + y * y
    assert s_polynomial(f, f).is_zero()
    assert s_polynomial(x * x, x * y).is_zero()
    assert s_polynomial(f, x * y) == y ** 3


def test_normal_form_examples():
    assert normal_form(x * x, [x]).is_zero()
    assert normal_form(y, [x]) == y


def test_buchberger_examples():
    gb = buchberger([x + y, y])
    assert set(gb.generators) == {x, y}
    R = PolyRing(Frame(1, 1))
    gb = buchberger([R.var(1, 1) ** 2])
    assert list(gb.generators) == [R.var(1, 1) ** 2]
    assert initial_ideal(buchberger([x])).generators == ((1, 0),)


def test_zero_ideal_has_empty_initial_ideal():
    gb = buchberger([R2.zero()])
    assert len(gb) == 0
    assert initial_ideal(gb).is_zero()


def test_family_membership_example():
    F = sequence_F(FamilySpec(2, 2))
    gb = buchberger(F)
    R = F[0].ring
    probe = R.var(1, 1) ** 2 * R.var(1, 2)
    # x11^2 x12 = x12 f11 - x21^2 x12, and x21^2 x12 is not in I
    assert not gb.contains(probe)
    assert gb.contains(probe + R.var(2, 1) ** 2 * R.var(1, 2))
    assert gb.contains(F[0] * R.var(2, 2) - F[1] * R.var(2, 1))


def _is_groebner(gb):
    gens = list(gb.generators)
    for f, g in itertools.combinations(gens, 2):
        if not normal_form(s_polynomial(f, g), gens).is_zero():
            return False
    return True


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3)])
@pytest.mark.parametrize("p", [0, 32003])
def test_buchberger_criterion_on_family(n, m, p):
    gb = buchberger(sequence_F(FamilySpec(n, m, 2, FieldSpec(p))))
    assert _is_groebner(gb)
    # reduced: monic, and no term of an element is divisible by another lead
    leads = gb.leading_monomials()
    for g in gb.generators:
        assert g.leading_coefficient == 1
        for mono, _ in g.terms:
            for lm in leads:
                if lm != g.leading_monomial:
                    assert not all(a >= b for a, b in zip(mono, lm))


@pytest.mark.parametrize("n,m", [(1, 2), (2, 2), (3, 2), (2, 3), (4, 2)])
@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_initial_ideal_matches_sympy(n, m, order):
    F = sequence_F(FamilySpec(n, m))
    gb = buchberger(F, MonomialOrder(order))
    assert sorted(gb.leading_monomials()) == sympy_leading_exponents(F, order)


@given(st.data())
@settings(max_examples=40)
def test_random_ideals_match_sympy(data):
    R = PolyRing(Frame(1, 3))
    gens = [data.draw(polys(R, max_terms=3, homogeneous=2)) for _ in range(data.draw(st.integers(1, 3)))]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    gb = buchberger(gens)
    assert _is_groebner(gb)
    assert sorted(gb.leading_monomials()) == sympy_leading_exponents(gens)


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2), (2, 3)])
def test_membership_of_random_combinations(n, m):
    rng = random.Random(n * 10 + m)
    F = sequence_F(FamilySpec(n, m))
    R = F[0].ring
    gb = buchberger(F)
    for _ in range(10):
        combo = R.zero()
        for f in F:
            q = R.zero()
            for k in range(R.nvars):
                s, t = R.frame.position(k)
                q = q + R.var(s, t).scale(rng.randint(-3, 3))
            combo = combo + q * f
        assert gb.contains(combo)
        # adding a nonzero combination of standard monomials leaves the ideal
        std = standard_monomials(gb, 3)
        extra = R.monomial(rng.choice(std), rng.randint(1, 5))
        assert not gb.contains(combo + extra)


@pytest.mark.parametrize("n,m", [(2, 2), (3, 3)])
def test_reduced_basis_is_independent_of_generator_order(n, m):
    F = sequence_F(FamilySpec(n, m))
    ref = buchberger(F).generators
    rng = random.Random(1)
    for _ in range(3):
        G = F[:]
        rng.shuffle(G)
        assert buchberger(G).generators == ref


def test_membership_survives_specialization():
    spec = FamilySpec(3, 3)
    F = sequence_F(spec)
    R = F[0].ring
    member = F[1] * R.var(1, 3) - F[4] * R.var(2, 1)
    for keep in ({1, 2}, {2, 3}, {1}):
        image = [specialize(f, keep) for f in F]
        image = [g for g in image if not g.is_zero()]
        gb = buchberger(image)
        assert gb.contains(specialize(member, keep))


def test_caps_are_reported():
    F = sequence_F(FamilySpec(3, 3))
    with pytest.raises(ResourceCapExceeded):
        buchberger(F, caps=Caps(max_pairs=5))
    with pytest.raises(ResourceCapExceeded):
        buchberger(F, caps=Caps(max_degree=3))


def test_degree_bound_gives_incomplete_basis():
    F = sequence_F(FamilySpec(2, 2))
    gb = buchberger(F, degree_bound=2)
    assert not gb.complete
    assert len(gb) == 3


def test_monomial_ideal_minimalizes():
    mi = MonomialIdeal.from_monomials([(2, 0), (1, 0), (1, 1)], 2)
    assert mi.generators == ((1, 0),)
