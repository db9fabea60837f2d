"""Representations of bound quiver algebras and their exact homological data."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Iterable, Mapping, Sequence

from .algebra import BoundQuiverAlgebra, Path, load_algebra, parse_algebra, serialize_algebra
from .errors import AlgebraMismatch, InvariantError, ParseError
from .linalg import (
    RationalMatrix,
    complement_basis,
    fraction_str,
    solve_coordinates,
    sparse_nullspace,
    sparse_rank,
    to_fraction,
)

ISO_SAMPLE_RANGE = 10 ** 6
ISO_RETRIES = 8


class Representation:
    """A point of mod(A, d): one exact matrix per arrow, shape d(head) x d(tail)."""

    __slots__ = ("algebra", "dims", "matrices", "_cache")

    def __init__(self, algebra: BoundQuiverAlgebra, dims: Mapping[int, int],
                 matrices: Mapping[str, RationalMatrix | Sequence[Sequence]] | None = None,
                 check: bool = True):
        self.algebra = algebra
        d = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        extra = set(dims) - set(algebra.vertices)
        if extra:
            raise InvariantError(f"dimension vector mentions unknown vertices {sorted(extra)}")
        if any(x < 0 for x in d.values()):
            raise InvariantError("negative dimension")
        self.dims = d
        matrices = dict(matrices or {})
        unknown = set(matrices) - set(algebra.quiver.arrow_map)
        if unknown:
            raise InvariantError(f"matrices given for unknown arrows {sorted(unknown)}")
        mats = {}
        for a in algebra.arrows:
            shape = (d[a.head], d[a.tail])
            m = matrices.get(a.name)
            if m is None:
                m = RationalMatrix.zeros(*shape)
            elif not isinstance(m, RationalMatrix):
                m = RationalMatrix(m, rows=shape[0], cols=shape[1]) if shape[0] == 0 or shape[1] == 0 \
                    else RationalMatrix(m)
            if m.shape != shape:
                raise InvariantError(f"arrow {a.name}: matrix shape {m.shape} but d(head) x d(tail) = {shape}")
            mats[a.name] = m
        self.matrices = mats
        self._cache: dict = {}
        if check:
            bad = self.violated_relations()
            if bad:
                raise InvariantError("relation(s) not satisfied: " + ", ".join(str(r) for r in bad))

    # -- basic data -----------------------------------------------------------
    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __getitem__(self, arrow: str) -> RationalMatrix:
        return self.matrices[arrow]

    def evaluate(self, path: Path) -> RationalMatrix:
        """Matrix of ``path``: product of arrow matrices, first-applied on the right."""
        if not path.arrows:
            return RationalMatrix.identity(self.dims[path.tail])
        out = self.matrices[path.arrows[0]]
        for name in path.arrows[1:]:
            out = self.matrices[name] @ out
        return out

    def violated_relations(self) -> list[Path]:
        return [r for r in self.algebra.relations if not self.evaluate(r).is_zero()]

    def check_relations(self) -> bool:
        return not self.violated_relations()

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return self.algebra == other.algebra and self.dims == other.dims and self.matrices == other.matrices

    def __hash__(self) -> int:
        return hash((self.dim_vector, tuple(sorted(self.matrices.items(), key=lambda kv: kv[0]))))

    def __repr__(self) -> str:
        return f"Representation(dims={self.dim_vector}, arrows={sorted(self.matrices)})"

    # -- transformations ----------------------------------------------------
    def conjugate(self, g: Mapping[int, RationalMatrix]) -> "Representation":
        """The representation g . M with matrices g_head M(a) g_tail^{-1}."""
        inv = {v: g[v].inverse() for v in self.algebra.vertices}
        mats = {a.name: g[a.head] @ self.matrices[a.name] @ inv[a.tail] for a in self.algebra.arrows}
        return Representation(self.algebra, self.dims, mats, check=False)

    def subrep_closure(self, gens: Mapping[int, Sequence[Sequence[Fraction]]]) -> dict[int, list[list[Fraction]]]:
        """Basis (per vertex) of the smallest subrepresentation containing ``gens``."""
        from .linalg import column_space_basis

        span = {v: column_space_basis([list(map(to_fraction, x)) for x in gens.get(v, [])], self.dims[v])
                for v in self.algebra.vertices}
        changed = True
        while changed:
            changed = False
            for a in self.algebra.arrows:
                m = self.matrices[a.name]
                images = [[sum((m[i, j] * x[j] for j in range(m.cols)), Fraction(0)) for i in range(m.rows)]
                          for x in span[a.tail]]
                new = column_space_basis(span[a.head] + images, self.dims[a.head])
                if len(new) > len(span[a.head]):
                    span[a.head] = new
                    changed = True
        return span

    def is_subrep(self, sub: Mapping[int, Sequence[Sequence[Fraction]]]) -> bool:
        closed = self.subrep_closure(sub)
        return all(len(closed[v]) == len(_indep(sub.get(v, []), self.dims[v])) for v in self.algebra.vertices)

    def quotient(self, sub: Mapping[int, Sequence[Sequence[Fraction]]]) -> "Representation":
        """M / U for a subrepresentation U given by spanning vectors per vertex."""
        U = {v: _indep(sub.get(v, []), self.dims[v]) for v in self.algebra.vertices}
        if not self.is_subrep(U):
            raise InvariantError("quotient by a subspace that is not closed under the arrows")
        comp = {v: complement_basis(U[v], self.dims[v]) for v in self.algebra.vertices}
        full = {}
        for v in self.algebra.vertices:
            n = self.dims[v]
            full[v] = U[v] + [[Fraction(int(i == j)) for i in range(n)] for j in comp[v]]
        mats = {}
        for a in self.algebra.arrows:
            m = self.matrices[a.name]
            k_head = len(U[a.head])
            cols = []
            for j in comp[a.tail]:
                img = list(m.column(j))
                coords = solve_coordinates(full[a.head], img)
                cols.append(coords[k_head:])
            mats[a.name] = RationalMatrix.from_columns(cols, len(comp[a.head]))
        dims = {v: len(comp[v]) for v in self.algebra.vertices}
        return Representation(self.algebra, dims, mats, check=True)

    # -- json -----------------------------------------------------------------
    def to_json_dict(self, algebra_ref: str | None = None) -> dict:
        return {
            "algebra": algebra_ref if algebra_ref is not None else serialize_algebra(self.algebra),
            "dims": {str(v): self.dims[v] for v in sorted(self.algebra.vertices)},
            "matrices": {a: self.matrices[a].to_strings() for a in sorted(self.matrices)},
        }

    def to_json(self, algebra_ref: str | None = None) -> str:
        return json.dumps(self.to_json_dict(algebra_ref), indent=2, sort_keys=True) + "\n"


def _indep(vectors, dim: int) -> list[list[Fraction]]:
    from .linalg import column_space_basis

    return column_space_basis([list(map(to_fraction, x)) for x in vectors], dim)


def representation_from_json(data: str | dict, base_dir: str | FsPath | None = None,
                             check: bool = True) -> Representation:
    """Read the ``.rep.json`` format.  ``algebra`` is inline ``.qa`` text or a path."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "algebra" not in data or "dims" not in data:
        raise ParseError("module file needs 'algebra' and 'dims' keys")
    ref = data["algebra"]
    if not isinstance(ref, str):
        raise ParseError("'algebra' must be a string")
    if "\n" in ref or "vertices:" in ref:
        A = parse_algebra(ref)
    else:
        p = FsPath(ref)
        if base_dir is not None and not p.is_absolute():
            p = FsPath(base_dir) / p
        A = load_algebra(p)
    try:
        dims = {int(k): int(v) for k, v in data["dims"].items()}
    except (ValueError, AttributeError, TypeError):
        raise ParseError("'dims' must map vertex ids to integers") from None
    mats = {}
    for name, rows in (data.get("matrices") or {}).items():
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise ParseError(f"matrix {name!r} must be a list of rows")
        try:
            vals = [[to_fraction(x) for x in r] for r in rows]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"matrix {name!r}: {exc}") from None
        if name in A.quiver.arrow_map:
            a = A.quiver.arrow(name)
            shape = (dims.get(a.head, 0), dims.get(a.tail, 0))
            if len(vals) != shape[0] or any(len(r) != shape[1] for r in vals):
                raise InvariantError(f"arrow {name}: matrix shape does not match d(head) x d(tail) = {shape}")
            mats[name] = RationalMatrix(vals, rows=shape[0], cols=shape[1])
        else:
            raise InvariantError(f"matrix given for unknown arrow {name!r}")
    return Representation(A, dims, mats, check=check)


def load_representation(path: str | FsPath, check: bool = True) -> Representation:
    p = FsPath(path)
    return representation_from_json(p.read_text(encoding="utf-8"), base_dir=p.parent, check=check)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def zero_rep(A: BoundQuiverAlgebra, dims: Mapping[int, int] | None = None) -> Representation:
    return Representation(A, dims or {}, {}, check=False)


def simple(A: BoundQuiverAlgebra, v: int) -> Representation:
    if v not in A.vertices:
        raise InvariantError(f"unknown vertex {v}")
    return Representation(A, {v: 1}, {}, check=False)


def direct_sum(*mods: Representation) -> Representation:
    if not mods:
        raise ValueError("direct_sum needs at least one summand")
    A = mods[0].algebra
    for m in mods[1:]:
        _same_algebra(mods[0], m)
    dims = {v: sum(m.dims[v] for m in mods) for v in A.vertices}
    mats = {a.name: RationalMatrix.block_diag(*(m.matrices[a.name] for m in mods)) for a in A.arrows}
    return Representation(A, dims, mats, check=False)


def indecomposable_projective(A: BoundQuiverAlgebra, v: int) -> Representation:
    """P(v): basis the paths starting at v, arrows act by post-composition."""
    if v not in A.vertices:
        raise InvariantError(f"unknown vertex {v}")
    basis = A.paths_from(v)
    at = {w: [p for p in basis if p.head == w] for w in A.vertices}
    index = {p: i for w in A.vertices for i, p in enumerate(at[w])}
    mats = {}
    for a in A.arrows:
        rows, cols = len(at[a.head]), len(at[a.tail])
        m = [[0] * cols for _ in range(rows)]
        for j, p in enumerate(at[a.tail]):
            q = A.extend(p, a.name)
            if q is not None:
                m[index[q]][j] = 1
        mats[a.name] = RationalMatrix(m, rows=rows, cols=cols)
    return Representation(A, {w: len(at[w]) for w in A.vertices}, mats, check=True)


def projective_basis(A: BoundQuiverAlgebra, v: int) -> dict[int, list[Path]]:
    """The path basis of P(v), grouped by vertex in the order used by indecomposable_projective."""
    basis = A.paths_from(v)
    return {w: [p for p in basis if p.head == w] for w in A.vertices}


# ---------------------------------------------------------------------------
# Hom and Ext
# ---------------------------------------------------------------------------

def _same_algebra(M: Representation, N: Representation) -> None:
    if M.algebra is not N.algebra and M.algebra != N.algebra:
        raise AlgebraMismatch("representations over different algebras")


@dataclass(frozen=True)
class HomSpace:
    source: Representation
    target: Representation
    basis: tuple[dict[int, RationalMatrix], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combination(self, coeffs: Sequence[Fraction | int]) -> dict[int, RationalMatrix]:
        out = {}
        for v in self.source.algebra.vertices:
            acc = RationalMatrix.zeros(self.target.dims[v], self.source.dims[v])
            for c, phi in zip(coeffs, self.basis):
                if c:
                    acc = acc + phi[v].scale(c)
            out[v] = acc
        return out


def _hom_layout(M: Representation, N: Representation) -> tuple[dict[int, int], int]:
    off, n = {}, 0
    for v in M.algebra.vertices:
        off[v] = n
        n += N.dims[v] * M.dims[v]
    return off, n


def _intertwiner_rows(M: Representation, N: Representation, off: dict[int, int]) -> list[dict[int, Fraction]]:
    """Rows of delta(c)_a = c_head M(a) - N(a) c_tail, one per arrow entry."""
    rows = []
    for a in M.algebra.arrows:
        Ma, Na = M.matrices[a.name], N.matrices[a.name]
        mt, nh, nt = M.dims[a.tail], N.dims[a.head], N.dims[a.tail]
        mh = M.dims[a.head]
        oh, ot = off[a.head], off[a.tail]
        for r in range(nh):
            for s in range(mt):
                row: dict[int, Fraction] = {}
                for k in range(mh):
                    x = Ma[k, s]
                    if x:
                        idx = oh + r * mh + k
                        row[idx] = row.get(idx, 0) + x
                for k in range(nt):
                    x = Na[r, k]
                    if x:
                        idx = ot + k * mt + s
                        row[idx] = row.get(idx, 0) - x
                row = {i: v for i, v in row.items() if v}
                if row:
                    rows.append(row)
    return rows


def hom(M: Representation, N: Representation) -> HomSpace:
    _same_algebra(M, N)
    off, n = _hom_layout(M, N)
    null = sparse_nullspace(_intertwiner_rows(M, N, off), n)
    basis = []
    for x in null:
        phi = {}
        for v in M.algebra.vertices:
            r, c = N.dims[v], M.dims[v]
            o = off[v]
            phi[v] = RationalMatrix([x[o + i * c:o + (i + 1) * c] for i in range(r)], rows=r, cols=c)
        basis.append(phi)
    return HomSpace(M, N, tuple(basis))


def hom_dim(M: Representation, N: Representation) -> int:
    _same_algebra(M, N)
    off, n = _hom_layout(M, N)
    return n - sparse_rank(_intertwiner_rows(M, N, off), n)


def end_dim(M: Representation) -> int:
    if "end_dim" not in M._cache:
        M._cache["end_dim"] = hom_dim(M, M)
    return M._cache["end_dim"]


def is_schur(M: Representation) -> bool:
    if M.is_zero():
        raise InvariantError("the zero module has no Schur status")
    return end_dim(M) == 1


def orbit_dim(M: Representation) -> int:
    return sum(x * x for x in M.dims.values()) - end_dim(M)


def _leibniz_rows(M: Representation, N: Representation) -> tuple[list[dict[int, Fraction]], int]:
    """Rows of D: z -> (sum_k N(suffix) z_{a_k} M(prefix))_r, and the number of z unknowns."""
    A = M.algebra
    zoff, nz = {}, 0
    for a in A.arrows:
        zoff[a.name] = nz
        nz += N.dims[a.head] * M.dims[a.tail]
    rows = []
    for rel in A.relations:
        arrs = rel.arrows
        nrow, ncol = N.dims[rel.head], M.dims[rel.tail]
        acc: list[list[dict[int, Fraction]]] = [[{} for _ in range(ncol)] for _ in range(nrow)]
        for k, name in enumerate(arrs):
            a = A.quiver.arrow(name)
            pre = M.evaluate(Path(rel.tail, a.tail, arrs[:k])) if k else RationalMatrix.identity(M.dims[a.tail])
            suf = (N.evaluate(Path(a.head, rel.head, arrs[k + 1:])) if k + 1 < len(arrs)
                   else RationalMatrix.identity(N.dims[a.head]))
            zc = M.dims[a.tail]
            base = zoff[name]
            for r in range(nrow):
                for s in range(ncol):
                    tgt = acc[r][s]
                    for u in range(suf.cols):
                        x = suf[r, u]
                        if not x:
                            continue
                        for v in range(pre.rows):
                            y = pre[v, s]
                            if y:
                                idx = base + u * zc + v
                                tgt[idx] = tgt.get(idx, 0) + x * y
        for r in range(nrow):
            for s in range(ncol):
                row = {i: v for i, v in acc[r][s].items() if v}
                if row:
                    rows.append(row)
    return rows, nz


def ext1_dim(M: Representation, N: Representation) -> int:
    """dim ker D - rank delta (valid for subpath-minimal monomial relation sets)."""
    _same_algebra(M, N)
    off, n = _hom_layout(M, N)
    rank_delta = sparse_rank(_intertwiner_rows(M, N, off), n)
    drows, nz = _leibniz_rows(M, N)
    ker_d = nz - sparse_rank(drows, nz)
    return ker_d - rank_delta


def tangent_dim(M: Representation) -> int:
    """dim ker D at (M, M): the Zariski tangent space to mod(A, d) at M."""
    drows, nz = _leibniz_rows(M, M)
    return nz - sparse_rank(drows, nz)


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

def _invertible_tuple(phi: Mapping[int, RationalMatrix]) -> bool:
    return all(m.rows == m.cols and m.det() != 0 for m in phi.values())


def find_isomorphism(M: Representation, N: Representation, retries: int = ISO_RETRIES,
                     seed: int = 0) -> dict[int, RationalMatrix] | None:
    """An invertible intertwiner M -> N, or None.

    Random integer combinations of a Hom basis are tried; an isomorphism, if
    one exists, is found with overwhelming probability, and a returned
    certificate is always exact.
    """
    _same_algebra(M, N)
    if M.dims != N.dims:
        return None
    if M.total_dim == 0:
        return {v: RationalMatrix.zeros(0, 0) for v in M.algebra.vertices}
    H = hom(M, N)
    if H.dim == 0 or H.dim != end_dim(M) or H.dim != end_dim(N):
        return None
    if H.dim == 1:
        phi = H.basis[0]
        return phi if _invertible_tuple(phi) else None
    rng = random.Random(seed * 1_000_003 + H.dim)
    for _ in range(retries):
        coeffs = [rng.randint(-ISO_SAMPLE_RANGE, ISO_SAMPLE_RANGE) for _ in range(H.dim)]
        phi = H.combination(coeffs)
        if _invertible_tuple(phi):
            return phi
    return None


def is_isomorphic(M: Representation, N: Representation) -> bool:
    return find_isomorphism(M, N) is not None


def is_intertwiner(M: Representation, N: Representation, phi: Mapping[int, RationalMatrix]) -> bool:
    return all(phi[a.head] @ M.matrices[a.name] == N.matrices[a.name] @ phi[a.tail] for a in M.algebra.arrows)


# ---------------------------------------------------------------------------
# endomorphism algebra
# ---------------------------------------------------------------------------

def _block(phi: Mapping[int, RationalMatrix], verts: Iterable[int]) -> RationalMatrix:
    return RationalMatrix.block_diag(*(phi[v] for v in verts))


def is_local_endomorphism_algebra(M: Representation) -> bool:
    """True iff End(M) = K.1 + N with N a nilpotent (two-sided) subalgebra.

    Every basis element is split as trace-scalar plus remainder; the
    remainders must span a space of codimension one whose iterated products
    vanish.
    """
    if M.is_zero():
        return False
    verts = list(M.algebra.vertices)
    n = M.total_dim
    H = hom(M, M)
    mats = [_block(phi, verts) for phi in H.basis]
    ident = RationalMatrix.identity(n)
    rem = []
    for X in mats:
        tr = sum((X[i, i] for i in range(n)), Fraction(0))
        rem.append(X - ident.scale(tr / n))
    flat = [[x for r in Y.tolist() for x in r] for Y in rem]
    from .linalg import column_space_basis

    nil = column_space_basis(flat, n * n)
    if len(nil) != len(mats) - 1:
        return False
    nil_m = [RationalMatrix([v[i * n:(i + 1) * n] for i in range(n)]) for v in nil]
    power = nil_m
    for _ in range(n + 1):
        if all(P.is_zero() for P in power):
            return True
        prods = [[x for r in (P @ Q).tolist() for x in r] for P in power for Q in nil_m]
        basis = column_space_basis(prods, n * n)
        power = [RationalMatrix([v[i * n:(i + 1) * n] for i in range(n)]) for v in basis]
    return all(P.is_zero() for P in power)


def is_nilpotent(X: RationalMatrix) -> bool:
    P = X
    for _ in range(X.rows):
        if P.is_zero():
            return True
        P = P @ X
    return P.is_zero()


def block_matrix(phi: Mapping[int, RationalMatrix], verts: Iterable[int]) -> RationalMatrix:
    return _block(phi, verts)


def rep_to_string(M: Representation) -> str:
    parts = [f"dims {M.dim_vector}"]
    for a in sorted(M.matrices):
        parts.append(f"{a}: " + "; ".join(" ".join(fraction_str(x) for x in r) for r in M.matrices[a].tolist()))
    return "\n".join(parts)
