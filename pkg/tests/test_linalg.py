from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repvar.linalg import RationalMatrix, sparse_nullspace, sparse_rank, to_fraction

small = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_to_fraction_accepts_exact_forms():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(-2) == Fraction(-2)


def test_to_fraction_rejects_floats_and_decimals():
    with pytest.raises(ValueError):
        to_fraction(0.5)
    with pytest.raises(ValueError):
        to_fraction("0.5")


def test_small_inverse_and_det():
    m = RationalMatrix([[1, 2], [3, 4]])
    assert m.det() == -2
    assert m.inverse().to_strings() == [["-2", "1"], ["3/2", "-1/2"]]
    assert m @ m.inverse() == RationalMatrix.identity(2)


def test_singular_matrix():
    m = RationalMatrix([[1, 2], [2, 4]])
    assert m.det() == 0
    assert not m.is_invertible()
    assert m.rank() == 1
    (v,) = m.nullspace()
    assert m @ RationalMatrix.from_columns([v], 2) == RationalMatrix.zeros(2, 1)


def test_empty_shapes():
    z = RationalMatrix.zeros(0, 3)
    assert z.rank() == 0
    assert len(z.nullspace()) == 3
    assert RationalMatrix.identity(0).det() == 1


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    m = RationalMatrix(rows)
    ns = m.nullspace()
    assert m.rank() + len(ns) == m.cols
    for v in ns:
        assert all(x == 0 for x in (m @ RationalMatrix.from_columns([v], m.cols)).column(0))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_sparse_kernels_agree_with_dense(rows):
    m = RationalMatrix(rows)
    sparse = [{j: Fraction(x) for j, x in enumerate(r) if x} for r in rows]
    assert sparse_rank(sparse, m.cols) == m.rank()
    assert len(sparse_nullspace(sparse, m.cols)) == m.cols - m.rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_multiplicative_and_transpose(rows):
    m = RationalMatrix(rows)
    assert m.det() == m.T.det()
    assert (m @ m).det() == m.det() ** 2
    assert m.is_invertible() == (m.det() != 0)
    if m.is_invertible():
        assert m.inverse() @ m == RationalMatrix.identity(m.rows)
