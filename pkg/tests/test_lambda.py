from fractions import Fraction

import pytest

from repvar.errors import InvariantError
from repvar.lambda_solver import (
    KINDS,
    JordanType,
    LambdaSpec,
    Summand,
    canonicalize,
    decompose,
    generic_stratum_point,
    jordan_matrix,
    orbit_dim_of_sum,
    strata_types,
    stratum_dim,
    summand_to_representation,
    verify_dense_orbit,
)
from repvar.cli import table_summands
from repvar.rep import end_dim, is_isomorphic, is_local_endomorphism_algebra, orbit_dim


def kinds(summands):
    return sorted((s.kind, s.params) for s in summands)


def test_strata_types_order():
    assert [t.parts for t in strata_types(3, 5)] == [(3,), (2, 1), (1, 1, 1)]
    assert [t.parts for t in strata_types(3, 2)] == [(2, 1), (1, 1, 1)]
    assert [t.parts for t in strata_types(0, 4)] == [()]


def test_jordan_type_counts():
    jt = JordanType((5, 2, 2, 1))
    assert jt.lam(1) == 4 and jt.lam(2) == 3 and jt.lam(3) == 1
    assert jt.lam_bar(2) == 2
    assert jt.d2 == sum(i * jt.lam_bar(i) for i in range(1, 6))


@pytest.mark.parametrize("d1,parts,dim", [(0, (1, 1), 0), (1, (2,), 4), (1, (1,), 1)])
def test_stratum_dim_examples(d1, parts, dim):
    assert stratum_dim(d1, JordanType(parts)) == dim


def test_generic_point_shape():
    spec = LambdaSpec(5)
    P = generic_stratum_point(1, JordanType((5,)), 3, spec)
    (entry,) = P.entries[0]
    assert entry[:3] == (0, 0, 0) and entry[3] != 0
    assert all(abs(c) <= 10 ** 6 for c in entry)
    assert P.to_representation().check_relations()
    assert generic_stratum_point(0, JordanType((2,)), 0, spec).a_matrix().cols == 0
    Q = generic_stratum_point(2, JordanType((1,)), 0, spec)
    assert len(Q.entries[0]) == 2
    assert generic_stratum_point(1, JordanType((5,)), 3, spec) == P


@pytest.mark.parametrize("n,d1,parts,expected", [
    (5, 1, (5,), [("D1m", (5,))]),
    (5, 1, (5, 1), [("D1_1plusN", (5,))]),
    (5, 2, (5, 2), [("D2_mplusN", (2, 5))]),
    (5, 3, (5,), [("D2m", (5,)), ("S1", ())]),
    (5, 3, (), [("S1", ())] * 3),
])
def test_decomposition_examples(n, d1, parts, expected):
    spec = LambdaSpec(n)
    dec, _ = decompose(d1, JordanType(parts), 0, spec)
    assert kinds(dec.summands) == sorted(expected)


def test_table_monomial_for_one_m():
    spec = LambdaSpec(5)
    M = summand_to_representation(Summand("D1m", (5,)), spec)
    # the column is x^3 in the basis 1, x, ..., x^4
    assert [r[0] for r in M.matrices["a"].to_strings()] == ["0", "0", "0", "1", "0"]


def test_small_table_rows():
    spec = LambdaSpec(4)
    M = summand_to_representation(Summand("D11"), spec)
    assert M.dim_vector == (1, 1) and M.matrices["a"].to_strings() == [["1"]] and M.matrices["b"].is_zero()
    assert summand_to_representation(Summand("S1"), spec).dim_vector == (1, 0)
    D = summand_to_representation(Summand("D2m", (2,)), spec)
    assert D.matrices["a"].to_strings() == [["0", "1"], ["1", "0"]]


@pytest.mark.parametrize("s,bad_n", [(Summand("D2_mplusN", (2, 3)), 5), (Summand("D1_1plusN", (2,)), 5),
                                     (Summand("D1m", (6,)), 5)])
def test_out_of_range_params(s, bad_n):
    with pytest.raises(InvariantError):
        summand_to_representation(s, LambdaSpec(bad_n))


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_table_rows_are_indecomposable(n):
    spec = LambdaSpec(n)
    for s in table_summands(n):
        M = summand_to_representation(s, spec)
        assert M.check_relations()
        assert M.dim_vector == s.dims
        assert is_local_endomorphism_algebra(M), s


@pytest.mark.parametrize("s,e", [(Summand("S1"), 1), (Summand("D11"), 1), (Summand("Jm_only", (1,)), 1),
                                 (Summand("Jm_only", (2,)), 2), (Summand("D1m", (2,)), 1)])
def test_end_dim_hand_oracle(s, e):
    assert end_dim(summand_to_representation(s, LambdaSpec(4))) == e


@pytest.mark.parametrize("n,d1,parts", [(3, 2, (3, 1)), (4, 3, (4, 2)), (5, 2, (5, 2)), (6, 3, (6, 3, 2))])
def test_decomposition_is_isomorphism(n, d1, parts):
    spec = LambdaSpec(n)
    dec, _ = decompose(d1, JordanType(parts), 11, spec)
    M = dec.point.to_representation()
    assert dec.verify_certificate()
    assert is_isomorphic(M, dec.direct_sum())
    assert orbit_dim(dec.direct_sum()) == orbit_dim_of_sum(dec.summands, spec)


@pytest.mark.parametrize("n,d1,parts", [(4, 2, (4, 2, 1)), (5, 3, (5, 3)), (5, 1, (5, 1))])
def test_moves_are_sound(n, d1, parts):
    spec = LambdaSpec(n)
    P = generic_stratum_point(d1, JordanType(parts), 5, spec)
    dec = canonicalize(P, record_moves=True)
    B = jordan_matrix(P.sizes)
    M = P.to_representation()
    assert dec.moves
    for mv in dec.moves:
        assert mv.z @ B == B @ mv.z, mv.description
        assert mv.z.is_invertible() and mv.g1.is_invertible()
        N = M.conjugate({1: mv.g1, 2: mv.z})
        assert N.matrices["b"] == B
        assert N.check_relations()
        M = N
    assert is_isomorphic(M, dec.direct_sum())


def test_downward_move_must_lie_in_ideal():
    from repvar.lambda_solver.canonical import _Work

    spec = LambdaSpec(4)
    w = _Work(generic_stratum_point(1, JordanType((4, 1)), 0, spec), record=False)
    # rows are ascending: row 0 has size 1, row 1 size 4.  Pushing the short row into
    # the long one is a module map only for f in (x^3); the other direction is free.
    with pytest.raises(InvariantError, match="x\\^3"):
        w.add_row(0, 1, {2: Fraction(5)})
    w.add_row(0, 1, {3: Fraction(5)})
    w.add_row(1, 0, {0: Fraction(1)})


def test_seed_independence_and_dense_orbit():
    spec = LambdaSpec(5)
    for parts in [(5, 3), (4, 2, 1), (2, 2)]:
        jt = JordanType(parts)
        reports = [verify_dense_orbit(2, jt, s, spec) for s in range(5)]
        assert len({r.summands for r in reports}) == 1
        assert all(r.dense for r in reports)


def test_every_kind_reachable():
    from repvar.cli import run_sweep

    res = run_sweep([4], 8, [0])
    assert all(res["kinds_seen"][k] > 0 for k in KINDS)
    assert res["all_dense"]
