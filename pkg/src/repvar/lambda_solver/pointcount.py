"""Finite-field point counts of Jordan strata, used as an independent dimension oracle.

The stratum of type t in mod(Lambda_n, (d1, d2)) over F_q is the set of
pairs (A, B) with B nilpotent of type t and B^2 A = 0.  For fixed B the
admissible A form the space Hom(K^{d1}, ker B^2), so

    |stratum(F_q)| = sum over B of type t of q^{d1 * dim ker B^2}.

The sum is taken by brute force over all d2 x d2 matrices.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .._kernels import power_rank_profiles
from .jordan import JordanType


def _type_from_ranks(k: int, ranks: np.ndarray) -> tuple[int, ...] | None:
    """Jordan type of a nilpotent matrix from the ranks of its powers, or None if not nilpotent."""
    if k and ranks[-1] != 0:
        return None
    full = [k] + [int(x) for x in ranks] + [0]
    ge = [full[i - 1] - full[i] for i in range(1, k + 1)]  # blocks of size >= i
    parts = []
    for i in range(1, k + 1):
        nxt = ge[i] if i < k else 0
        parts.extend([i] * (ge[i - 1] - nxt))
    return tuple(sorted(parts, reverse=True))


@lru_cache(maxsize=None)
def _type_histogram(k: int, q: int) -> dict[tuple[tuple[int, ...], int], int]:
    """(Jordan type, rank B^2) -> number of matrices."""
    if k == 0:
        return {((), 0): 1}
    prof = power_rank_profiles(k, q)
    keys, counts = np.unique(prof, axis=0, return_counts=True)
    out: dict = {}
    for row, c in zip(keys, counts):
        t = _type_from_ranks(k, row)
        if t is None:
            continue
        r2 = int(row[1]) if k >= 2 else 0
        out[(t, r2)] = out.get((t, r2), 0) + int(c)
    return out


def stratum_point_count(d1: int, jt: JordanType, q: int) -> int:
    k = jt.d2
    total = 0
    for (t, r2), c in _type_histogram(k, q).items():
        if t == jt.parts:
            total += c * q ** (d1 * (k - r2))
    return total


def fitted_dimension(d1: int, jt: JordanType, qs: tuple[int, ...] = (2, 3)) -> int:
    """Exponent e of the monic model |X(F_q)| ~ q^e, least-squares in log space, rounded."""
    num = den = 0.0
    for q in qs:
        c = stratum_point_count(d1, jt, q)
        if c == 0:
            raise ValueError(f"empty stratum over F_{q}")
        lq = math.log(q)
        num += lq * math.log(c)
        den += lq * lq
    return round(num / den)
