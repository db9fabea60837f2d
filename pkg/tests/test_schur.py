import pytest

from repvar.algebra import a2, butterfly, kronecker, lambda_algebra
from repvar.errors import AlgebraError
from repvar.rep import is_isomorphic, is_schur
from repvar.schur import nondistributive_witness, schur_module, schur_scan, verify_schur_family

K = kronecker()


def test_kronecker_witness():
    w = nondistributive_witness(K)
    assert (w.e, w.f, w.l) == (1, 2, 1)
    assert {str(w.v), str(w.w)} == {"a", "b"}


@pytest.mark.parametrize("A", [butterfly(), a2()])
def test_no_witness(A):
    assert nondistributive_witness(A) is None


def test_witness_needs_triangular():
    with pytest.raises(AlgebraError, match="triangular"):
        nondistributive_witness(lambda_algebra(4))


def test_v_lambda_family():
    w = nondistributive_witness(K)
    rep = verify_schur_family(K, w, range(11))
    assert rep.all_schur and rep.pairwise_non_isomorphic
    assert rep.count == 11 and rep.dims == [1, 1]
    V0, V1 = schur_module(K, w, 0), schur_module(K, w, 1)
    assert is_schur(V0) and not is_isomorphic(V0, V1)


def test_family_not_applicable():
    assert verify_schur_family(a2(), None, range(3)).to_json()["applicable"] is False


def test_scan_is_monotone_in_budget():
    counts = [schur_scan(K, {1: 1, 2: 1}, b).count for b in (5, 20, 40)]
    assert counts == sorted(counts)
    assert counts[-1] >= 5


def test_scan_a2():
    for d in ({1: 1, 2: 0}, {1: 0, 2: 1}, {1: 1, 2: 1}):
        assert schur_scan(a2(), d, 20).count == 1
    assert schur_scan(a2(), {1: 2, 2: 1}, 20).count == 0


def test_scan_is_deterministic():
    a = schur_scan(K, {1: 1, 2: 2}, 15, seed=3).to_json()
    b = schur_scan(K, {1: 1, 2: 2}, 15, seed=3).to_json()
    assert a == b
