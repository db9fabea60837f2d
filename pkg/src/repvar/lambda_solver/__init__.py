"""Generic decomposition and dense-orbit certification for Lambda_n."""

from .canonical import (
    KINDS,
    Decomposition,
    DenseOrbitReport,
    Summand,
    canonicalize,
    decompose,
    orbit_dim_of_sum,
    summand_to_representation,
    verify_dense_orbit,
)
from .jordan import JordanType, LambdaSpec, nilpotent_orbit_dim, strata_types, stratum_dim
from .truncpoly import TruncPolyMatrix, generic_stratum_point, jordan_block, jordan_matrix

__all__ = [
    "KINDS", "Decomposition", "DenseOrbitReport", "JordanType", "LambdaSpec", "Summand", "TruncPolyMatrix",
    "canonicalize", "decompose", "generic_stratum_point", "jordan_block", "jordan_matrix", "nilpotent_orbit_dim",
    "orbit_dim_of_sum", "strata_types", "stratum_dim", "summand_to_representation", "verify_dense_orbit",
]
