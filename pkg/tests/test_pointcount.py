import pytest

from repvar.lambda_solver import JordanType, strata_types, stratum_dim
from repvar.lambda_solver.pointcount import fitted_dimension, stratum_point_count


def test_regular_2x2_count_over_f2():
    # B of type {2} over F_2: 3 matrices; B^2 = 0 so every A is allowed (q^2 each)
    assert stratum_point_count(1, JordanType((2,)), 2) == 3 * 4


def test_zero_type_count():
    assert stratum_point_count(1, JordanType((1,)), 3) == 3
    assert stratum_point_count(2, JordanType(()), 2) == 1


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("d1", [0, 1, 2])
@pytest.mark.parametrize("d2", [1, 2, 3])
def test_fitted_dimension_matches_formula(n, d1, d2):
    for jt in strata_types(d2, n):
        assert fitted_dimension(d1, jt) == stratum_dim(d1, jt)
