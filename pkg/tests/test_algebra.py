import pytest

from repvar.algebra import (
    a2,
    butterfly,
    from_spec,
    kronecker,
    lambda_algebra,
    load_algebra,
    parse_algebra,
    serialize_algebra,
    truncated_loop,
)
from repvar.errors import AlgebraError, ParseError
from repvar.rep import indecomposable_projective


def basis_names(A):
    return [str(p) for p in A.path_basis]


def test_butterfly_file(data_dir):
    B = load_algebra(data_dir / "butterfly.qa")
    assert len(B.vertices) == 5 and len(B.arrows) == 6
    assert sorted(str(r) for r in B.relations) == ["e a", "e b", "f a", "f b"]
    assert B == butterfly()


def test_loop_algebra_basis():
    assert basis_names(truncated_loop(2)) == ["e1", "b"]


def test_lambda3_basis():
    L = lambda_algebra(3)
    assert basis_names(L) == ["e1", "e2", "a", "b", "b a", "b b"]
    assert L.dim == 6


def test_lambda5_file(data_dir):
    L = load_algebra(data_dir / "lambda5.qa")
    assert L == lambda_algebra(5)
    assert sorted(str(r) for r in L.relations) == ["b b a", "b b b b b"]


def test_a2_basis():
    assert a2().dim == 3


@pytest.mark.parametrize("A,expected", [(a2(), True), (lambda_algebra(3), False), (butterfly(), True)])
def test_triangular(A, expected):
    assert A.is_triangular() is expected


def test_connected():
    assert butterfly().is_connected()
    assert lambda_algebra(4).is_connected()
    assert not from_spec([1, 2], []).is_connected()


@pytest.mark.parametrize("A,v,dims", [(a2(), 1, (1, 1)), (kronecker(), 1, (1, 2)), (lambda_algebra(3), 1, (1, 2))])
def test_projective_dims(A, v, dims):
    assert indecomposable_projective(A, v).dim_vector == dims


def test_projective_a2_matrix():
    P = indecomposable_projective(a2(), 1)
    assert P.matrices["a"].to_strings() == [["1"]]


@pytest.mark.parametrize("A", [a2(), kronecker(), butterfly(), lambda_algebra(2), lambda_algebra(6), truncated_loop(3)])
def test_round_trip(A):
    text = serialize_algebra(A)
    assert serialize_algebra(parse_algebra(text)) == text
    assert parse_algebra(text) == A


def test_hereditary_cycle_rejected():
    with pytest.raises(AlgebraError, match="infinite"):
        from_spec([1], [("x", 1, 1)])


def test_non_minimal_relations_rejected():
    with pytest.raises(AlgebraError):
        from_spec([1, 2], [("a", 1, 2), ("b", 2, 2)], ["b b", "b b b"])


@pytest.mark.parametrize("text,line", [
    ("vertices: 1 2\narrow a: 1 -> 2\nrelation: a q\n", 3),
    ("vertices: 1 2\narrow a: 1 => 2\n", 2),
    ("vertices: 1 x\n", 1),
])
def test_parse_errors_carry_location(text, line):
    with pytest.raises(ParseError) as exc:
        parse_algebra(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}")
