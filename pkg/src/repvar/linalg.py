"""Exact linear algebra over the rationals.

Elimination is fraction-free: every row is scaled to a primitive integer
vector and pivots are combined by integer cross-multiplication, so no
denominators appear until back substitution.  Rows are stored sparsely
(``dict`` column -> int), which keeps the intertwiner systems built by
:mod:`repvar.rep` cheap even when they have a few hundred unknowns.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Number = int | Fraction | str


def to_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or "." in s or "e" in s.lower():
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    if isinstance(x, float) or not float(x).is_integer():
        raise ValueError(f"not an exact rational: {x!r}")
    # numpy integers and the like
    return Fraction(int(x))


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# sparse fraction-free elimination
# ---------------------------------------------------------------------------

def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = reduce(gcd, row.values(), 0)
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def integer_row(row: dict[int, Fraction]) -> dict[int, int]:
    """Scale a sparse rational row to a primitive integer row."""
    row = {c: v for c, v in row.items() if v}
    if not row:
        return {}
    den = reduce(lcm, (v.denominator for v in row.values()), 1)
    return _primitive({c: int(v * den) for c, v in row.items()})


def echelon(rows: Iterable[dict[int, int]], ncols: int) -> list[tuple[int, dict[int, int]]]:
    """Row-echelon form of sparse integer rows.

    Returns ``[(pivot_col, row), ...]`` in increasing pivot order.  Within a
    column the pivot is the candidate of smallest magnitude (ties: sparsest),
    which limits coefficient growth.
    """
    live = [r for r in (dict(r) for r in rows) if r]
    out: list[tuple[int, dict[int, int]]] = []
    for c in range(ncols):
        if not live:
            break
        cand = [i for i, r in enumerate(live) if c in r]
        if not cand:
            continue
        k = min(cand, key=lambda i: (abs(live[i][c]), len(live[i])))
        piv = live[k]
        pv = piv[c]
        rest = []
        for i, r in enumerate(live):
            if i == k:
                continue
            rv = r.get(c)
            if rv is None:
                rest.append(r)
                continue
            g = gcd(pv, rv)
            a, b = pv // g, rv // g
            new = {j: a * v for j, v in r.items()}
            for j, v in piv.items():
                w = new.get(j, 0) - b * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            if new:
                rest.append(_primitive(new))
        out.append((c, piv))
        live = rest
    return out


def sparse_rank(rows: Iterable[dict[int, Fraction]], ncols: int) -> int:
    return len(echelon((integer_row(r) for r in rows), ncols))


def sparse_nullspace(rows: Iterable[dict[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : row . x = 0 for every row}`` as dense rational vectors."""
    ech = echelon((integer_row(r) for r in rows), ncols)
    pivots = {c for c, _ in ech}
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for c, row in reversed(ech):
            s = sum((v * x[j] for j, v in row.items() if j != c), Fraction(0))
            x[c] = -s / row[c]
        basis.append(x)
    return basis


def _dense_rows(data: Sequence[Sequence[Fraction]]) -> list[dict[int, Fraction]]:
    return [{j: v for j, v in enumerate(r) if v} for r in data]


# ---------------------------------------------------------------------------
# RationalMatrix
# ---------------------------------------------------------------------------

class RationalMatrix:
    """Immutable dense matrix of :class:`fractions.Fraction` entries."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Sequence[Sequence[Number]] = (), rows: int | None = None,
                 cols: int | None = None):
        tup = tuple(tuple(to_fraction(x) for x in r) for r in data)
        if rows is None:
            rows = len(tup)
        if cols is None:
            cols = len(tup[0]) if tup else 0
        if len(tup) != rows or any(len(r) != cols for r in tup):
            raise ValueError(f"ragged or mis-shaped matrix data for shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = tup
        self._hash = None

    # constructors ----------------------------------------------------------
    @classmethod
    def _raw(cls, data: tuple, rows: int, cols: int) -> "RationalMatrix":
        m = object.__new__(cls)
        m.rows, m.cols, m._data, m._hash = rows, cols, data, None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._raw(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]], rows: int) -> "RationalMatrix":
        cols = [tuple(to_fraction(x) for x in c) for c in columns]
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(rows)), rows, len(cols))

    @classmethod
    def block_diag(cls, *blocks: "RationalMatrix") -> "RationalMatrix":
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        out = [[Fraction(0)] * c for _ in range(r)]
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.rows):
                out[i0 + i][j0:j0 + b.cols] = b._data[i]
            i0 += b.rows
            j0 += b.cols
        return cls._raw(tuple(tuple(x) for x in out), r, c)

    # access ----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def to_strings(self) -> list[list[str]]:
        return [[fraction_str(x) for x in r] for r in self._data]

    # arithmetic ------------------------------------------------------------
    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        data = tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in ocols)
            for r in self._data
        )
        return RationalMatrix._raw(data, self.rows, other.cols)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.rows, self.cols)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, c: Number) -> "RationalMatrix":
        c = to_fraction(c)
        return RationalMatrix._raw(tuple(tuple(c * x for x in r) for r in self._data),
                                   self.rows, self.cols)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(zip(*self._data)) if self.rows else
                                   tuple(() for _ in range(self.cols)), self.cols, self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        return f"RationalMatrix({self.to_strings()!r}, rows={self.rows}, cols={self.cols})"

    # exact algebra -----------------------------------------------------------
    def rank(self) -> int:
        return sparse_rank(_dense_rows(self._data), self.cols)

    def nullspace(self) -> list[list[Fraction]]:
        return sparse_nullspace(_dense_rows(self._data), self.cols)

    def det(self) -> Fraction:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.rows
        if n != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return Fraction(1)
        den = reduce(lcm, (x.denominator for r in self._data for x in r), 1)
        a = [[int(x * den) for x in r] for r in self._data]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return Fraction(0)
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return Fraction(sign * a[n - 1][n - 1], den ** n)

    def inverse(self) -> "RationalMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._data)]
        for c in range(n):
            p = next((i for i in range(c, n) if aug[i][c]), None)
            if p is None:
                raise ZeroDivisionError("singular matrix")
            aug[c], aug[p] = aug[p], aug[c]
            pv = aug[c][c]
            aug[c] = [x / pv for x in aug[c]]
            for i in range(n):
                if i != c and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
        return RationalMatrix._raw(tuple(tuple(r[n:]) for r in aug), n, n)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.det() != 0


def column_space_basis(vectors: Sequence[Sequence[Fraction]], dim: int) -> list[list[Fraction]]:
    """Maximal independent subfamily of ``vectors`` (kept in the given order)."""
    chosen: list[list[Fraction]] = []
    ech: list[tuple[int, dict[int, int]]] = []
    for v in vectors:
        trial = echelon([integer_row({j: x for j, x in enumerate(v) if x})] + [r for _, r in ech], dim)
        if len(trial) > len(ech):
            chosen.append(list(v))
            ech = trial
    return chosen


def complement_basis(subspace: Sequence[Sequence[Fraction]], dim: int) -> list[int]:
    """Indices of standard basis vectors completing ``subspace`` to ``K^dim``."""
    rows = [integer_row({j: x for j, x in enumerate(v) if x}) for v in subspace]
    ech = echelon(rows, dim)
    have = len(ech)
    out = []
    for i in range(dim):
        if have == dim:
            break
        trial = echelon([r for _, r in ech] + [{i: 1}], dim)
        if len(trial) > len(ech):
            ech = trial
            have += 1
            out.append(i)
    return out


def solve_coordinates(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_k basis_k = v``, or None if ``v`` is outside the span."""
    n = len(basis)
    dim = len(v)
    rows = [{k: basis[k][i] for k in range(n) if basis[k][i]} | ({n: -v[i]} if v[i] else {})
            for i in range(dim)]
    null = sparse_nullspace(rows, n + 1)
    for x in null:
        if x[n]:
            return [x[k] / x[n] for k in range(n)]
    if not any(v):
        return [Fraction(0)] * n
    return None
