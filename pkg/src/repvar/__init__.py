"""Exact computations with representations of bound quiver algebras."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    BoundQuiverAlgebra,
    Path,
    Quiver,
    a2,
    butterfly,
    kronecker,
    lambda_algebra,
    load_algebra,
    parse_algebra,
    serialize_algebra,
    truncated_loop,
)
from .linalg import RationalMatrix  # noqa: E402
from .rep import (  # noqa: E402
    Representation,
    direct_sum,
    end_dim,
    ext1_dim,
    hom,
    indecomposable_projective,
    is_isomorphic,
    is_schur,
    orbit_dim,
)

__all__ = [
    "BoundQuiverAlgebra", "Path", "Quiver", "RationalMatrix", "Representation", "__version__", "a2", "butterfly",
    "direct_sum", "end_dim", "ext1_dim", "hom", "indecomposable_projective", "is_isomorphic", "is_schur",
    "kronecker", "lambda_algebra", "load_algebra", "orbit_dim", "parse_algebra", "serialize_algebra",
    "truncated_loop",
]
