"""Normal form of generic points of mod(Lambda_n, d) and their splitting.

Working picture.  A generic point is a TruncPolyMatrix whose row of block
size i >= 2 reads ``L x^{i-2} + S x^{i-1}`` with row vectors L ("lead") and
S ("sock") over the active columns; a size-1 row has only S.  Moves are

* column operations (GL(d1) at vertex 1),
* adding f times row s to row r, allowed when f lies in
  (x^{max(0, size r - size s)}), plus invertible rescalings of a row by a
  unit of K[x].  These are exactly the automorphisms of the loop module.

Every move is applied to an augmented matrix [A | Z] so that at the end
Z A0 C = A_final, which yields an exact isomorphism certificate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import InvariantError, NonGenericSample
from ..linalg import RationalMatrix, solve_coordinates
from ..rep import Representation, hom_dim, is_intertwiner
from .jordan import JordanType, LambdaSpec, stratum_dim
from .truncpoly import TruncPolyMatrix, generic_stratum_point, jordan_matrix

MAX_RETRIES = 16

KINDS = ("S1", "Jm_only", "D11", "D1m", "D2m", "D1_1plusN", "D2_mplusN")


@dataclass(frozen=True, order=True)
class Summand:
    kind: str
    params: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvariantError(f"unknown summand kind {self.kind!r}")

    def sort_key(self):
        return (KINDS.index(self.kind), self.params)

    @property
    def row_sizes(self) -> tuple[int, ...]:
        k, p = self.kind, self.params
        if k == "S1":
            return ()
        if k == "D11":
            return (1,)
        if k in ("Jm_only", "D1m", "D2m"):
            return (p[0],)
        if k == "D1_1plusN":
            return (1, p[0])
        return (p[0], p[1])

    @property
    def ncols(self) -> int:
        return {"S1": 1, "Jm_only": 0, "D11": 1, "D1m": 1, "D2m": 2, "D1_1plusN": 1, "D2_mplusN": 2}[self.kind]

    @property
    def dims(self) -> tuple[int, int]:
        return (self.ncols, sum(self.row_sizes))

    def monomials(self) -> list[list[int | None]]:
        """Exponent of the monomial entry at (row, column); None for zero."""
        k, p = self.kind, self.params
        if k in ("S1", "Jm_only"):
            return [[] for _ in self.row_sizes]
        if k == "D11":
            return [[0]]
        if k == "D1m":
            return [[p[0] - 2]]
        if k == "D2m":
            return [[p[0] - 1, p[0] - 2]]
        if k == "D1_1plusN":
            return [[0], [p[0] - 2]]
        m, N = p
        return [[m - 2, m - 1], [None, N - 2]]

    def check_params(self, n: int) -> None:
        k, p = self.kind, self.params
        need = {"S1": 0, "D11": 0, "Jm_only": 1, "D1m": 1, "D2m": 1, "D1_1plusN": 1, "D2_mplusN": 2}[k]
        if len(p) != need:
            raise InvariantError(f"{k} takes {need} parameter(s)")
        ok = {
            "S1": True,
            "D11": True,
            "Jm_only": bool(p) and 1 <= p[0] <= n,
            "D1m": bool(p) and 2 <= p[0] <= n,
            "D2m": bool(p) and 2 <= p[0] <= n,
            "D1_1plusN": bool(p) and 3 <= p[0] <= n,
            "D2_mplusN": len(p) == 2 and 2 <= p[0] and p[0] + 2 <= p[1] <= n,
        }[k]
        if not ok:
            raise InvariantError(f"parameters {p} out of range for {k} with n = {n}")

    def label(self) -> str:
        d = self.dims
        if self.kind == "S1":
            return "(1,0)"
        if self.kind == "Jm_only":
            return f"(0,J{self.params[0]})"
        if self.kind == "D11":
            return "(1,J1)"
        if self.kind == "D1m":
            return f"(1,J{self.params[0]})"
        if self.kind == "D2m":
            return f"(2,J{self.params[0]})"
        if self.kind == "D1_1plusN":
            return f"(1,J1+J{self.params[0]})"
        return f"({d[0]},J{self.params[0]}+J{self.params[1]})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": list(self.params), "dims": list(self.dims), "label": self.label()}


def summand_to_representation(s: Summand, spec: LambdaSpec) -> Representation:
    s.check_params(spec.n)
    sizes = s.row_sizes
    cols = s.ncols
    rows = []
    for i, mons in zip(sizes, s.monomials()):
        for k in range(i):
            rows.append([1 if (mons and mons[j] == k) else 0 for j in range(cols)])
    a = RationalMatrix(rows, rows=sum(sizes), cols=cols)
    return Representation(spec.algebra(), {1: cols, 2: sum(sizes)}, {"a": a, "b": jordan_matrix(sizes)})


def sort_summands(ss) -> tuple[Summand, ...]:
    return tuple(sorted(ss, key=Summand.sort_key))


# ---------------------------------------------------------------------------
# working state
# ---------------------------------------------------------------------------

def _poly_str(f: dict[int, Fraction]) -> str:
    return " + ".join(f"{c}x^{k}" for k, c in sorted(f.items())) or "0"


@dataclass
class Move:
    """One recorded move; ``g1`` acts at vertex 1 and ``z`` at vertex 2."""

    description: str
    g1: RationalMatrix
    z: RationalMatrix


class _Work:
    def __init__(self, P: TruncPolyMatrix, record: bool):
        self.sizes = list(P.sizes)
        self.d1 = P.d1
        self.d2 = P.d2
        self.off = []
        acc = 0
        for i in self.sizes:
            self.off.append(acc)
            acc += i
        A0 = P.a_matrix()
        # W = [A | Z], Z starts as the identity
        self.W = [list(A0.row(i)) + [Fraction(int(i == j)) for j in range(self.d2)] for i in range(self.d2)]
        self.C = [[Fraction(int(i == j)) for j in range(self.d1)] for i in range(self.d1)]
        self.rows = list(range(len(self.sizes)))
        self.cols = list(range(self.d1))
        self.out: list[tuple[Summand, list[int], list[int]]] = []
        self.record = record
        self.moves: list[Move] = []

    # -- reading ---------------------------------------------------------------
    def L(self, r: int, j: int) -> Fraction:
        i = self.sizes[r]
        return self.W[self.off[r] + i - 2][j] if i >= 2 else Fraction(0)

    def S(self, r: int, j: int) -> Fraction:
        return self.W[self.off[r] + self.sizes[r] - 1][j]

    def lam2(self) -> list[int]:
        return [r for r in self.rows if self.sizes[r] >= 2]

    # -- moves -------------------------------------------------------------------
    def _z_of_row_move(self, src: int, dst: int, f: dict[int, Fraction], replace: bool) -> RationalMatrix:
        z = [[Fraction(int(i == j)) for j in range(self.d2)] for i in range(self.d2)]
        os_, od = self.off[src], self.off[dst]
        if replace:
            for k in range(self.sizes[dst]):
                z[od + k][od + k] = Fraction(0)
        for k in range(self.sizes[src]):
            for t, c in f.items():
                if k + t < self.sizes[dst]:
                    z[od + k + t][os_ + k] += c
        return RationalMatrix(z)

    def add_row(self, s: int, r: int, f: dict[int, Fraction]) -> None:
        """row_r += f * row_s."""
        f = {t: c for t, c in f.items() if c}
        if not f:
            return
        if s == r:
            raise InvariantError("use scale_row for a row acting on itself")
        lo = max(0, self.sizes[r] - self.sizes[s])
        if min(f) < lo:
            raise InvariantError(f"move f = {_poly_str(f)} from size {self.sizes[s]} to size {self.sizes[r]} "
                                 f"is not in (x^{lo})")
        if self.record:
            self.moves.append(Move(f"row{r} += ({_poly_str(f)}) row{s}", _eye(self.d1),
                                   self._z_of_row_move(s, r, f, False)))
        os_, od, nr = self.off[s], self.off[r], self.sizes[r]
        width = self.d1 + self.d2
        for k in range(self.sizes[s]):
            src = self.W[os_ + k]
            if not any(src):
                continue
            for t, c in f.items():
                if k + t < nr:
                    dst = self.W[od + k + t]
                    for j in range(width):
                        if src[j]:
                            dst[j] += c * src[j]

    def scale_row(self, r: int, u: dict[int, Fraction]) -> None:
        """row_r <- u * row_r for a unit u of K[x]/(x^size)."""
        if not u.get(0):
            raise InvariantError("scaling polynomial must have a nonzero constant term")
        if self.record:
            self.moves.append(Move(f"row{r} *= ({_poly_str(u)})", _eye(self.d1),
                                   self._z_of_row_move(r, r, u, True)))
        o, i = self.off[r], self.sizes[r]
        old = [list(self.W[o + k]) for k in range(i)]
        width = self.d1 + self.d2
        for k in range(i):
            new = [Fraction(0)] * width
            for t, c in u.items():
                if 0 <= k - t < i and c:
                    src = old[k - t]
                    for j in range(width):
                        if src[j]:
                            new[j] += c * src[j]
            self.W[o + k] = new

    def col_transform(self, cols: Sequence[int], g: Sequence[Sequence[Fraction]]) -> None:
        """Replace the given columns by (those columns) . g."""
        k = len(cols)
        if self.record:
            G = _eye(self.d1).tolist()
            for a in range(k):
                for b in range(k):
                    G[cols[a]][cols[b]] = g[a][b]
            self.moves.append(Move("column transform", RationalMatrix(G).inverse(), _eye(self.d2)))
        for M in (self.W, self.C):
            for row in M:
                old = [row[c] for c in cols]
                if not any(old):
                    continue
                for b in range(k):
                    row[cols[b]] = sum((old[a] * g[a][b] for a in range(k) if old[a]), Fraction(0))

    def add_col(self, src: int, dst: int, c: Fraction) -> None:
        """col_dst += c * col_src."""
        if not c:
            return
        if self.record:
            G = _eye(self.d1).tolist()
            G[src][dst] = c
            self.moves.append(Move(f"col{dst} += {c} col{src}", RationalMatrix(G).inverse(), _eye(self.d2)))
        for M in (self.W, self.C):
            for row in M:
                if row[src]:
                    row[dst] += c * row[src]

    def scale_col(self, j: int, c: Fraction) -> None:
        if not c:
            raise InvariantError("zero column scale")
        if c == 1:
            return
        if self.record:
            G = _eye(self.d1).tolist()
            G[j][j] = c
            self.moves.append(Move(f"col{j} *= {c}", RationalMatrix(G).inverse(), _eye(self.d2)))
        for M in (self.W, self.C):
            for row in M:
                row[j] *= c

    # -- bookkeeping ---------------------------------------------------------------
    def emit(self, s: Summand, rows: list[int], cols: list[int]) -> None:
        self.out.append((s, rows, cols))
        for r in rows:
            self.rows.remove(r)
        for c in cols:
            self.cols.remove(c)


def _eye(n: int) -> RationalMatrix:
    return RationalMatrix.identity(n)


# ---------------------------------------------------------------------------
# the reduction
# ---------------------------------------------------------------------------

def _peel(w: _Work) -> None:
    """Split off the largest row as (0, J) while there are fewer columns than leads."""
    leads = w.lam2()
    u = leads[-1]
    others = leads[:-1]
    basis = [[w.L(s, j) for j in w.cols] for s in others]
    target = [w.L(u, j) for j in w.cols]
    coeffs = solve_coordinates(basis, target)
    if coeffs is None:
        raise NonGenericSample("leads of the remaining rows do not span")
    N = w.sizes[u]
    for s, c in zip(others, coeffs):
        w.add_row(s, u, {N - w.sizes[s]: -c})
    target = [w.S(u, j) for j in w.cols]
    coeffs = solve_coordinates(basis, target)
    if coeffs is None:
        raise NonGenericSample("leads of the remaining rows do not span the sock of the peeled row")
    for s, c in zip(others, coeffs):
        w.add_row(s, u, {N - w.sizes[s] + 1: -c})
    if any(w.L(u, j) or w.S(u, j) for j in w.cols):
        raise NonGenericSample("peeled row did not vanish")
    w.emit(Summand("Jm_only", (N,)), [u], [])


def _normalise_leads(w: _Work) -> tuple[dict[int, int], list[int]]:
    """Column transform making each lead a distinct unit vector; returns pivots and free columns."""
    leads = w.lam2()
    cols = list(w.cols)
    k, d = len(leads), len(cols)
    Lm = RationalMatrix([[w.L(r, j) for j in cols] for r in leads], rows=k, cols=d)
    if k:
        gram = Lm @ Lm.T
        if gram.det() == 0:
            raise NonGenericSample("leads are linearly dependent")
        R = Lm.T @ gram.inverse()
        K = Lm.nullspace()
        g = [list(R.row(i)) + [K[t][i] for t in range(len(K))] for i in range(d)]
        w.col_transform(cols, g)
    pivots = {r: cols[i] for i, r in enumerate(leads)}
    return pivots, cols[k:]


def _zero_sock(w: _Work, piv: dict[int, int]) -> None:
    for r in list(w.rows):
        sr = w.sizes[r]
        for s, p in piv.items():
            if s not in w.rows:
                continue
            c = w.S(r, p)
            if not c:
                continue
            ss = w.sizes[s]
            if s == r:
                w.scale_row(r, {0: Fraction(1), 1: -c})
            elif ss <= sr:
                w.add_row(s, r, {sr - ss + 1: -c})
            elif ss == sr + 1:
                w.add_row(s, r, {0: -c})


def _split_free(w: _Work, t: int, piv: dict[int, int], free: list[int]) -> None:
    m = w.sizes[t]
    q0 = next((q for q in free if w.S(t, q)), None)
    if q0 is None:
        raise NonGenericSample("top row has no sock on the free columns")
    sig = w.S(t, q0)
    for j in list(w.cols):
        if j != q0 and w.S(t, j) and j != piv.get(t):
            w.add_col(q0, j, -w.S(t, j) / sig)
    w.scale_col(q0, 1 / sig)
    for r in list(w.rows):
        if r == t:
            continue
        c = w.S(r, q0)
        if not c:
            continue
        w.add_row(t, r, {w.sizes[r] - m: -c})
        if m >= 2:
            w.add_col(piv[r], piv[t], c)
    _zero_sock(w, piv)
    if m >= 2:
        w.emit(Summand("D2m", (m,)), [t], [q0, piv[t]])
    else:
        w.emit(Summand("D11"), [t], [q0])


def _split_paired(w: _Work, t: int, piv: dict[int, int]) -> None:
    m = w.sizes[t]
    u = w.rows[-1]
    N = w.sizes[u]
    pu = piv[u]
    sig = w.S(t, pu)
    if not sig:
        raise NonGenericSample("pairing pivot vanished")
    for s in list(piv):
        if s in (t, u) or s not in w.rows:
            continue
        c = w.S(t, piv[s])
        if not c:
            continue
        c = c / sig
        w.add_row(s, u, {N - w.sizes[s]: c})
        w.add_col(pu, piv[s], -c)
    _zero_sock(w, piv)
    if any(w.S(t, j) for j in w.cols if j != pu):
        raise NonGenericSample("top row kept sock entries outside the paired column")
    w.scale_row(t, {0: 1 / sig})
    if m >= 2:
        w.scale_col(piv[t], sig)
    for r in list(w.rows):
        if r in (t, u):
            continue
        c = w.S(r, pu)
        if not c:
            continue
        w.add_row(t, r, {w.sizes[r] - m: -c})
        if m >= 2:
            w.add_col(piv[r], piv[t], c)
    _zero_sock(w, piv)
    if m >= 2:
        w.emit(Summand("D2_mplusN", (m, N)), [t, u], [piv[t], pu])
    else:
        w.emit(Summand("D1_1plusN", (N,)), [t, u], [pu])


def _step(w: _Work) -> None:
    if not w.cols:
        for r in list(w.rows):
            w.emit(Summand("Jm_only", (w.sizes[r],)), [r], [])
        return
    if not w.rows:
        for c in list(w.cols):
            w.emit(Summand("S1"), [], [c])
        return
    if len(w.cols) < len(w.lam2()):
        _peel(w)
        return
    piv, free = _normalise_leads(w)
    _zero_sock(w, piv)
    t = w.rows[0]
    m = w.sizes[t]
    if free:
        _split_free(w, t, piv, free)
        return
    N = w.sizes[w.rows[-1]]
    if (m >= 2 and N >= m + 2) or (m == 1 and N >= 3):
        _split_paired(w, t, piv)
        return
    if any(w.S(t, j) for j in w.cols):
        raise NonGenericSample("unpaired top row kept a nonzero sock")
    if m >= 2:
        w.emit(Summand("D1m", (m,)), [t], [piv[t]])
    else:
        w.emit(Summand("Jm_only", (1,)), [t], [])


@dataclass
class Decomposition:
    """Result of the reduction.

    ``iso_vertex1`` / ``iso_vertex2`` form an isomorphism from the sampled
    representation to ``direct_sum`` (the summands in the listed order).
    """

    summands: tuple[Summand, ...]
    point: TruncPolyMatrix
    iso_vertex1: RationalMatrix
    iso_vertex2: RationalMatrix
    ordered: tuple[Summand, ...]
    moves: list[Move] = field(default_factory=list)

    @property
    def multiset(self) -> Counter:
        return Counter(self.summands)

    def direct_sum(self) -> Representation:
        from ..rep import direct_sum

        spec = self.point.spec
        return direct_sum(*(summand_to_representation(s, spec) for s in self.ordered)) if self.ordered else \
            Representation(spec.algebra(), {1: 0, 2: 0})

    def verify_certificate(self) -> bool:
        M = self.point.to_representation(check=False)
        D = self.direct_sum()
        phi = {1: self.iso_vertex1, 2: self.iso_vertex2}
        return (phi[1].is_invertible() and phi[2].is_invertible() and is_intertwiner(M, D, phi))


def canonicalize(P: TruncPolyMatrix, record_moves: bool = False) -> Decomposition:
    """Split a generic stratum point into indecomposable table modules.

    Raises NonGenericSample when a pivot the reduction relies on vanishes.
    """
    w = _Work(P, record_moves)
    guard = 4 * (len(P.sizes) + P.d1) + 4
    while w.rows or w.cols:
        _step(w)
        guard -= 1
        if guard < 0:
            raise InvariantError("reduction failed to terminate")
    # exact check of the final block form against the table modules
    perm2: list[int] = []
    perm1: list[int] = []
    ordered = []
    for s, rows, cols in w.out:
        for r in rows:
            perm2.extend(range(w.off[r], w.off[r] + w.sizes[r]))
        perm1.extend(cols)
        ordered.append(s)
    d1, d2 = P.d1, P.d2
    Z = RationalMatrix([row[d1:] for row in w.W], rows=d2, cols=d2)
    A_fin = RationalMatrix([row[:d1] for row in w.W], rows=d2, cols=d1)
    P2 = _perm(perm2)
    P1 = _perm(perm1)
    C = RationalMatrix(w.C, rows=d1, cols=d1)
    phi1 = P1 @ C.inverse() if d1 else C
    phi2 = P2 @ Z
    dec = Decomposition(sort_summands(ordered), P, phi1, phi2, tuple(ordered), w.moves)
    target = dec.direct_sum()
    if (P2 @ A_fin @ P1.T) != target.matrices["a"]:
        raise NonGenericSample("final matrix is not in block normal form")
    if not dec.verify_certificate():
        raise InvariantError("isomorphism certificate failed")
    return dec


def _perm(order: list[int]) -> RationalMatrix:
    n = len(order)
    return RationalMatrix([[1 if order[i] == j else 0 for j in range(n)] for i in range(n)], rows=n, cols=n)


def decompose(d1: int, jt: JordanType, seed: int, spec: LambdaSpec, retries: int = MAX_RETRIES,
              record_moves: bool = False) -> tuple[Decomposition, int]:
    """Sample and canonicalize, resampling on non-generic draws.  Returns (result, attempts)."""
    last: Exception | None = None
    for k in range(retries + 1):
        P = generic_stratum_point(d1, jt, seed if k == 0 else seed * 7919 + 104729 * k, spec)
        try:
            return canonicalize(P, record_moves), k + 1
        except NonGenericSample as exc:
            last = exc
    raise NonGenericSample(f"no generic sample after {retries} retries: {last}")


# ---------------------------------------------------------------------------
# dimension certification
# ---------------------------------------------------------------------------

_HOM_CACHE: dict[tuple[int, Summand, Summand], int] = {}


def summand_hom_dim(s: Summand, t: Summand, spec: LambdaSpec) -> int:
    key = (spec.n, s, t)
    if key not in _HOM_CACHE:
        _HOM_CACHE[key] = hom_dim(summand_to_representation(s, spec), summand_to_representation(t, spec))
    return _HOM_CACHE[key]


def orbit_dim_of_sum(summands: Sequence[Summand], spec: LambdaSpec) -> int:
    """Orbit dimension of the direct sum, from pairwise Hom dimensions."""
    d1 = sum(s.dims[0] for s in summands)
    d2 = sum(s.dims[1] for s in summands)
    end = sum(summand_hom_dim(s, t, spec) for s in summands for t in summands)
    return d1 * d1 + d2 * d2 - end


@dataclass
class DenseOrbitReport:
    d1: int
    jordan_type: JordanType
    n: int
    seed: int
    summands: tuple[Summand, ...]
    orbit_dim: int
    stratum_dim: int
    attempts: int
    certificate_ok: bool

    @property
    def dense(self) -> bool:
        return self.orbit_dim == self.stratum_dim

    def to_json(self) -> dict:
        return {
            "d": [self.d1, self.jordan_type.d2],
            "type": list(self.jordan_type.parts),
            "n": self.n,
            "seed": self.seed,
            "summands": [s.to_json() for s in self.summands],
            "orbit_dim": self.orbit_dim,
            "stratum_dim": self.stratum_dim,
            "dense_orbit": self.dense,
            "attempts": self.attempts,
            "certificate_ok": self.certificate_ok,
        }


def verify_dense_orbit(d1: int, jt: JordanType, seed: int, spec: LambdaSpec) -> DenseOrbitReport:
    dec, attempts = decompose(d1, jt, seed, spec)
    return DenseOrbitReport(d1, jt, spec.n, seed, dec.summands, orbit_dim_of_sum(dec.summands, spec),
                            stratum_dim(d1, jt), attempts, True)
