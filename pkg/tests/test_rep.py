from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repvar.algebra import a2, kronecker, lambda_algebra, truncated_loop
from repvar.errors import InvariantError
from repvar.linalg import RationalMatrix
from repvar.rep import (
    Representation,
    direct_sum,
    end_dim,
    ext1_dim,
    hom_dim,
    indecomposable_projective,
    is_isomorphic,
    is_local_endomorphism_algebra,
    is_schur,
    orbit_dim,
    representation_from_json,
    simple,
    zero_rep,
)
from repvar.stability import euler_form

K = kronecker()
A2 = a2()


def kron(lam, mu=1) -> Representation:
    return Representation(K, {1: 1, 2: 1}, {"a": RationalMatrix([[mu]]), "b": RationalMatrix([[lam]])})


def lam3(col) -> Representation:
    J = RationalMatrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    return Representation(lambda_algebra(3), {1: 1, 2: 3}, {"a": RationalMatrix([[c] for c in col]), "b": J},
                          check=False)


def test_relation_check_table_module():
    assert lam3([0, 0, 1]).check_relations()


def test_relation_check_detects_violation():
    M = lam3([1, 0, 0])
    assert not M.check_relations()
    assert [str(r) for r in M.violated_relations()] == ["b b a"]
    with pytest.raises(InvariantError, match="b b a"):
        Representation(M.algebra, M.dims, M.matrices)


def test_zero_rep_ok():
    assert zero_rep(lambda_algebra(3), {1: 2, 2: 0}).check_relations()


def test_hom_simple():
    S1, S2 = simple(A2, 1), simple(A2, 2)
    assert hom_dim(S1, S1) == 1
    assert hom_dim(S1, S2) == 0


def test_kronecker_band_hom_and_schur():
    assert hom_dim(kron(2), kron(3)) == 0
    for lam in range(-3, 4):
        assert is_schur(kron(lam))
    assert end_dim(direct_sum(simple(A2, 1), simple(A2, 1))) == 4


def test_ext_examples():
    L = truncated_loop(2)
    triv = simple(L, 1)
    assert ext1_dim(triv, triv) == 1
    S1, S2 = simple(A2, 1), simple(A2, 2)
    assert ext1_dim(S1, S2) == 1
    assert ext1_dim(S2, S1) == 0


def test_direct_sum_and_end():
    D = direct_sum(simple(A2, 1), simple(A2, 2))
    assert D.dim_vector == (1, 1)
    assert D.matrices["a"].to_strings() == [["0"]]
    assert end_dim(direct_sum(kron(2), kron(2))) == 4


def test_isomorphism():
    M = kron(5)
    g = {1: RationalMatrix([[3]]), 2: RationalMatrix([[-2]])}
    assert is_isomorphic(M, M.conjugate(g))
    assert not is_isomorphic(kron(2), kron(3))
    assert not is_isomorphic(direct_sum(simple(A2, 1), simple(A2, 2)), indecomposable_projective(A2, 1))


def test_orbit_dim_examples():
    L = lambda_algebra(3)
    M = Representation(L, {1: 1, 2: 1}, {"a": RationalMatrix([[1]]), "b": RationalMatrix([[0]])})
    assert orbit_dim(M) == 1
    assert orbit_dim(zero_rep(L, {1: 2, 2: 0})) == 0
    assert orbit_dim(kron(1)) == 1


def test_local_end():
    assert is_local_endomorphism_algebra(indecomposable_projective(A2, 1))
    assert not is_local_endomorphism_algebra(direct_sum(simple(A2, 1), simple(A2, 2)))


def test_json_round_trip():
    M = kron(Fraction(2, 3))
    N = representation_from_json(M.to_json())
    assert N == M
    assert N.matrices["b"].to_strings() == [["2/3"]]


def test_json_shape_error():
    bad = '{"algebra": "vertices: 1 2\\narrow a: 1 -> 2\\n", "dims": {"1": 1, "2": 2}, "matrices": {"a": [["1"]]}}'
    with pytest.raises(InvariantError, match="shape"):
        representation_from_json(bad)


def _random_rep(Q, dims, entries):
    it = iter(entries)
    mats = {a.name: RationalMatrix([[next(it) for _ in range(dims[a.tail])] for _ in range(dims[a.head])],
                                   rows=dims[a.head], cols=dims[a.tail]) for a in Q.arrows}
    return Representation(Q, dims, mats)


dim2 = st.tuples(st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=40, deadline=None)
@given(dim2, dim2, st.lists(st.integers(-2, 2), min_size=40, max_size=40), st.sampled_from(["a2", "kronecker"]))
def test_hereditary_euler_form(d, e, entries, which):
    Q = A2 if which == "a2" else K
    M = _random_rep(Q, {1: d[0], 2: d[1]}, entries)
    N = _random_rep(Q, {1: e[0], 2: e[1]}, entries[::-1])
    assert hom_dim(M, N) - ext1_dim(M, N) == euler_form(Q, M.dims, N.dims)
