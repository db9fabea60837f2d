"""Block matrices over K[x] with per-row truncation.

A row of block size i holds polynomials modulo x^i, written as coefficient
tuples ``(c_0, ..., c_{i-1})``.  In the Jordan basis ``1, x, ..., x^{i-1}``
of ``K[x]/(x^i)`` the loop acts as the lower shift, so a coefficient tuple is
literally the column of the arrow matrix restricted to that block.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import InvariantError
from ..linalg import RationalMatrix
from ..rep import Representation
from .jordan import JordanType, LambdaSpec

COEFF_RANGE = 10 ** 6


def jordan_block(i: int) -> RationalMatrix:
    """Multiplication by x on K[x]/(x^i) in the basis 1, x, ..., x^{i-1}."""
    return RationalMatrix([[1 if r == c + 1 else 0 for c in range(i)] for r in range(i)], rows=i, cols=i)


def jordan_matrix(sizes: Sequence[int]) -> RationalMatrix:
    return RationalMatrix.block_diag(*(jordan_block(i) for i in sizes)) if sizes else RationalMatrix.zeros(0, 0)


@dataclass(frozen=True)
class TruncPolyMatrix:
    """Rows in ascending block size; ``entries[r][j]`` has length ``sizes[r]``."""

    spec: LambdaSpec
    sizes: tuple[int, ...]
    d1: int
    entries: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        if list(self.sizes) != sorted(self.sizes):
            raise InvariantError("rows must be listed by ascending block size")
        if any(s > self.spec.n for s in self.sizes):
            raise InvariantError(f"block size exceeds n = {self.spec.n}")
        if len(self.entries) != len(self.sizes):
            raise InvariantError("one entry row per Jordan block required")
        for i, row in zip(self.sizes, self.entries):
            if len(row) != self.d1:
                raise InvariantError("row length differs from d1")
            for e in row:
                if len(e) != i:
                    raise InvariantError(f"entry in a size-{i} row must have {i} coefficients")
                if any(e[k] for k in range(max(0, i - 2))):
                    raise InvariantError(f"entry in a size-{i} row is not in the ideal (x^{max(0, i - 2)})")

    @property
    def jordan_type(self) -> JordanType:
        return JordanType(self.sizes)

    @property
    def d2(self) -> int:
        return sum(self.sizes)

    def a_matrix(self) -> RationalMatrix:
        rows = []
        for i, row in zip(self.sizes, self.entries):
            for k in range(i):
                rows.append([row[j][k] for j in range(self.d1)])
        return RationalMatrix(rows, rows=self.d2, cols=self.d1)

    def to_representation(self, check: bool = True) -> Representation:
        A = self.spec.algebra()
        return Representation(A, {1: self.d1, 2: self.d2},
                              {"a": self.a_matrix(), "b": jordan_matrix(self.sizes)}, check=check)

    def __str__(self) -> str:
        def poly(c):
            terms = [("" if k == 0 else ("x" if k == 1 else f"x^{k}"), v) for k, v in enumerate(c) if v]
            if not terms:
                return "0"
            return " + ".join(f"{v}{'*' + m if m else ''}" if v != 1 or not m else m for m, v in terms)

        return "\n".join(f"J{i}: [" + ", ".join(poly(e) for e in row) + "]"
                         for i, row in zip(self.sizes, self.entries))


def generic_stratum_point(d1: int, jt: JordanType, seed: int, spec: LambdaSpec) -> TruncPolyMatrix:
    """Random point of the stratum with coefficients drawn from [-10^6, 10^6]."""
    if d1 < 0:
        raise InvariantError("d1 must be non-negative")
    if jt.largest > spec.n:
        raise InvariantError(f"Jordan type {jt} has a block larger than n = {spec.n}")
    rng = random.Random(f"stratum:{seed}:{d1}:{jt.label()}")
    sizes = jt.ascending
    entries = []
    for i in sizes:
        row = []
        for _ in range(d1):
            lo = max(0, i - 2)
            coeffs = [Fraction(0)] * lo + [Fraction(rng.randint(-COEFF_RANGE, COEFF_RANGE)) for _ in range(i - lo)]
            row.append(tuple(coeffs))
        entries.append(tuple(row))
    return TruncPolyMatrix(spec, sizes, d1, tuple(entries))
