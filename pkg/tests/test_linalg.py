import random

import sympy
from hypothesis import given, strategies as st

from quadreg import FieldSpec
from quadreg.linalg import bareiss_rank, rank, rank_fraction_free, rank_mod_p
from oracles import rank_mod_p as dense_rank_mod_p

matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def sparse(mat):
    return [{j: v for j, v in enumerate(row) if v} for row in mat]


@given(matrices)
def test_rational_rank_matches_sympy(mat):
    expected = sympy.Matrix(mat).rank()
    assert rank_fraction_free(sparse(mat)) == expected
    assert bareiss_rank(mat) == expected


@given(matrices, st.sampled_from([3, 7, 101, 32003]))
def test_mod_p_rank_matches_dense(mat, p):
    assert rank_mod_p(sparse(mat), p) == dense_rank_mod_p(mat, p)


def test_characteristic_dependence():
    mat = [[2, 1], [1, 2]]  # det 3
    assert rank(sparse(mat), FieldSpec(0)) == 2
    assert rank(sparse(mat), FieldSpec(3)) == 1


def test_large_entries_stay_exact():
    rng = random.Random(5)
    rows = [[rng.randint(-10**12, 10**12) for _ in range(8)] for _ in range(6)]
    rows.append([a + b for a, b in zip(rows[0], rows[1])])
    assert rank_fraction_free(sparse(rows)) == 6
