"""Weights, King stability over finite fields, canonical weights and the AR translate."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ._kernels import rank_mod_p
from .algebra import BoundQuiverAlgebra, Path
from .errors import EnumerationBudgetExceeded, InvariantError
from .linalg import RationalMatrix, column_space_basis, complement_basis, solve_coordinates
from .rep import (
    Representation,
    direct_sum,
    hom,
    hom_dim,
    indecomposable_projective,
    is_isomorphic,
    is_schur,
    projective_basis,
)

DEFAULT_PRIMES = (101, 103)
DEFAULT_DIM_CAP = 10
DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class Weight:
    theta: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, mapping: Mapping[int, int]) -> "Weight":
        return cls(tuple(sorted((int(k), int(v)) for k, v in mapping.items())))

    @classmethod
    def parse(cls, text: str, vertices: Sequence[int]) -> "Weight":
        vals = [int(t) for t in text.replace(" ", "").split(",") if t]
        if len(vals) != len(vertices):
            raise InvariantError(f"weight needs {len(vertices)} entries, got {len(vals)}")
        return cls.of(dict(zip(vertices, vals)))

    def __getitem__(self, v: int) -> int:
        return dict(self.theta).get(v, 0)

    def __call__(self, dims: Mapping[int, int]) -> int:
        return sum(self[v] * d for v, d in dims.items())

    def as_list(self, vertices: Sequence[int]) -> list[int]:
        return [self[v] for v in vertices]


# ---------------------------------------------------------------------------
# projective presentations
# ---------------------------------------------------------------------------

@dataclass
class ProjectivePresentation:
    """P1 -> P0 -> M -> 0.

    ``p0_generators`` lists (vertex, vector of M) for the summands of P0;
    ``p1_generators`` lists (vertex, vector of P0 at that vertex) for P1.
    """

    module: Representation
    p0_generators: list[tuple[int, list[Fraction]]]
    p1_generators: list[tuple[int, list[Fraction]]]
    p0: Representation
    p0_basis: dict[int, list[tuple[int, Path]]]
    minimal: bool

    def _mult(self, gens) -> dict[int, int]:
        out = {v: 0 for v in self.module.algebra.vertices}
        for v, _ in gens:
            out[v] += 1
        return out

    @property
    def p0_mult(self) -> dict[int, int]:
        return self._mult(self.p0_generators)

    @property
    def p1_mult(self) -> dict[int, int]:
        return self._mult(self.p1_generators)

    def map_matrix(self) -> RationalMatrix:
        """Columns: images of the P1 generators, in the concatenated P0 basis over all vertices."""
        A = self.module.algebra
        offs, n = {}, 0
        for v in A.vertices:
            offs[v] = n
            n += len(self.p0_basis[v])
        cols = []
        for v, vec in self.p1_generators:
            col = [Fraction(0)] * n
            col[offs[v]:offs[v] + len(vec)] = vec
            cols.append(col)
        return RationalMatrix.from_columns(cols, n)


def _top_generators(M: Representation) -> list[tuple[int, list[Fraction]]]:
    A = M.algebra
    gens = []
    for v in A.vertices:
        rad = []
        for a in A.quiver.in_arrows(v):
            m = M.matrices[a.name]
            rad.extend(list(m.column(j)) for j in range(m.cols))
        rad_basis = column_space_basis(rad, M.dims[v])
        for j in complement_basis(rad_basis, M.dims[v]):
            gens.append((v, [Fraction(int(i == j)) for i in range(M.dims[v])]))
    return gens


def minimal_projective_presentation(M: Representation) -> ProjectivePresentation:
    if M.is_zero():
        raise InvariantError("the zero module has no presentation")
    A = M.algebra
    gens = _top_generators(M)
    P0 = direct_sum(*(indecomposable_projective(A, v) for v, _ in gens))
    pb = [projective_basis(A, v) for v, _ in gens]
    basis = {w: [(g, p) for g in range(len(gens)) for p in pb[g][w]] for w in A.vertices}
    # kernel of P0 -> M, vertex by vertex
    kernel: dict[int, list[list[Fraction]]] = {}
    for w in A.vertices:
        cols = []
        for g, p in basis[w]:
            m = M.evaluate(p)
            vec = gens[g][1]
            cols.append([sum((m[i, j] * vec[j] for j in range(m.cols)), Fraction(0)) for i in range(m.rows)])
        pi = RationalMatrix.from_columns(cols, M.dims[w])
        if pi.rank() != M.dims[w]:
            raise InvariantError("top generators do not generate the module")
        kernel[w] = pi.nullspace()
    # generators of the kernel = complement of its radical
    p1 = []
    minimal = True
    for w in A.vertices:
        rad = []
        for a in A.quiver.in_arrows(w):
            m = P0.matrices[a.name]
            for x in kernel[a.tail]:
                rad.append([sum((m[i, j] * x[j] for j in range(m.cols)), Fraction(0)) for i in range(m.rows)])
        rad_b = column_space_basis(rad, len(basis[w]))
        full = column_space_basis(rad_b + kernel[w], len(basis[w]))
        for x in full[len(rad_b):]:
            p1.append((w, x))
        idem = [k for k, (g, p) in enumerate(basis[w]) if not p.arrows]
        if any(x[k] for x in kernel[w] for k in idem):
            minimal = False
    return ProjectivePresentation(M, gens, p1, P0, basis, minimal)


def canonical_weight(M: Representation) -> Weight:
    pres = minimal_projective_presentation(M)
    p0, p1 = pres.p0_mult, pres.p1_mult
    return Weight.of({v: p0[v] - p1[v] for v in M.algebra.vertices})


def euler_form(A: BoundQuiverAlgebra, d: Mapping[int, int], e: Mapping[int, int]) -> int:
    """Sum_i d_i e_i - Sum_a d_{ta} e_{ha} (the homological Euler form when A is hereditary)."""
    return sum(d[v] * e[v] for v in A.vertices) - sum(d[a.tail] * e[a.head] for a in A.arrows)


# ---------------------------------------------------------------------------
# projective summands and the AR translate
# ---------------------------------------------------------------------------

def projective_multiplicities(M: Representation) -> dict[int, int]:
    """Multiplicity of each P(i) as a direct summand of M.

    It equals the rank of the pairing Hom(M, P(i)) x M_i -> K sending (g, m)
    to the e_i-coefficient of g(m).
    """
    A = M.algebra
    out = {}
    for i in A.vertices:
        if M.dims[i] == 0:
            out[i] = 0
            continue
        P = indecomposable_projective(A, i)
        e_idx = projective_basis(A, i)[i].index(Path(i, i, ()))
        rows = [list(g[i].row(e_idx)) for g in hom(M, P).basis]
        out[i] = RationalMatrix(rows, rows=len(rows), cols=M.dims[i]).rank() if rows else 0
    return out


@dataclass
class TranslateResult:
    module: Representation
    warnings: list[str] = field(default_factory=list)
    projective_summands: dict[int, int] = field(default_factory=dict)


def ar_translate(M: Representation) -> TranslateResult:
    """tau M = D Tr M, from the minimal presentation by the transpose-dual recipe."""
    A = M.algebra
    warnings = []
    proj = projective_multiplicities(M)
    if any(proj.values()):
        warnings.append("projective summand(s) " + ", ".join(f"P({v})^{k}" for v, k in proj.items() if k)
                        + " stripped: their translate is zero")
    pres = minimal_projective_presentation(M)
    g0 = [v for v, _ in pres.p0_generators]
    g1 = pres.p1_generators
    # Hom(P(i), A) is spanned by the basis paths ending at i; split by tail vertex k
    def dual_basis(targets: Sequence[int], k: int) -> list[tuple[int, Path]]:
        return [(g, x) for g, i in enumerate(targets) for x in A.path_basis if x.head == i and x.tail == k]

    t1 = [v for v, _ in g1]
    src = {k: dual_basis(g0, k) for k in A.vertices}
    tgt = {k: dual_basis(t1, k) for k in A.vertices}
    tindex = {k: {b: n for n, b in enumerate(tgt[k])} for k in A.vertices}
    # the P1 generators as combinations of (P0 generator, path)
    images = []
    for w, vec in g1:
        images.append([(pres.p0_basis[w][n], c) for n, c in enumerate(vec) if c])
    lift: dict[int, list[list[Fraction]]] = {}
    proj_: dict[int, list[list[Fraction]]] = {}
    dims = {}
    for k in A.vertices:
        cols = []
        for g, x in src[k]:
            col = [Fraction(0)] * len(tgt[k])
            for h, terms in enumerate(images):
                for (g2, p), c in terms:
                    if g2 != g:
                        continue
                    y = A.concat(x, p)
                    if y is not None:
                        col[tindex[k][(h, y)]] += c
            cols.append(col)
        img = column_space_basis(cols, len(tgt[k]))
        comp = complement_basis(img, len(tgt[k]))
        dims[k] = len(comp)
        lift[k] = comp
        full = img + [[Fraction(int(i == j)) for i in range(len(tgt[k]))] for j in comp]
        proj_[k] = full
    mats = {}
    for a in A.arrows:
        hk, tk = a.head, a.tail
        # right action of a: Tr_{ha} -> Tr_{ta}, u |-> a then u
        cols = []
        for j in lift[hk]:
            h, u = tgt[hk][j]
            y = A.concat(Path(a.tail, a.head, (a.name,)), u)
            vec = [Fraction(0)] * len(tgt[tk])
            if y is not None:
                vec[tindex[tk][(h, y)]] = Fraction(1)
            coords = solve_coordinates(proj_[tk], vec)
            cols.append(coords[len(proj_[tk]) - dims[tk]:])
        tr = RationalMatrix.from_columns(cols, dims[tk])  # shape dims[ta] x dims[ha]
        mats[a.name] = tr.T
    tau = Representation(A, dims, mats, check=True)
    return TranslateResult(tau, warnings, proj)


def is_homogeneous(M: Representation) -> bool:
    if M.is_zero():
        raise InvariantError("the zero module")
    return is_isomorphic(M, ar_translate(M).module)


# ---------------------------------------------------------------------------
# finite-field submodule oracle
# ---------------------------------------------------------------------------

def _mod_p(m: RationalMatrix, p: int) -> np.ndarray:
    out = np.zeros(m.shape, dtype=np.int64)
    for i in range(m.rows):
        for j in range(m.cols):
            x = m[i, j]
            if x.denominator % p == 0:
                raise InvariantError(f"prime {p} divides a denominator of the module")
            out[i, j] = (x.numerator % p) * pow(x.denominator, p - 2, p) % p
    return out


def _gaussian_binomial_total(n: int, p: int) -> int:
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def _subspaces(n: int, p: int):
    """All subspaces of F_p^n as (pivot pattern, basis rows in reduced echelon form)."""
    yield (), np.zeros((0, n), dtype=np.int64)
    for k in range(1, n + 1):
        for piv in itertools.combinations(range(n), k):
            free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
            for vals in itertools.product(range(p), repeat=len(free)):
                B = np.zeros((k, n), dtype=np.int64)
                for r in range(k):
                    B[r, piv[r]] = 1
                for (r, c), v in zip(free, vals):
                    B[r, c] = v
                yield piv, B


@dataclass(frozen=True)
class Submodule:
    dims: tuple[int, ...]
    pattern: tuple[tuple[int, ...], ...]


def enumerate_submodules(M: Representation, p: int, budget: int = DEFAULT_BUDGET) -> list[Submodule]:
    """Every subrepresentation of M mod p, by depth-first search over echelon subspaces."""
    A = M.algebra
    verts = list(A.vertices)
    est = 1
    for v in verts:
        est *= _gaussian_binomial_total(M.dims[v], p)
    mats = {a.name: _mod_p(M.matrices[a.name], p) for a in A.arrows}
    cands = {}
    total_cands = sum(_gaussian_binomial_total(M.dims[v], p) for v in verts)
    if total_cands > budget:
        raise EnumerationBudgetExceeded(f"{total_cands} candidate subspaces exceed the budget {budget}")
    for v in verts:
        cands[v] = list(_subspaces(M.dims[v], p))
    found: list[Submodule] = []
    steps = [0]
    chosen: dict[int, np.ndarray] = {}
    pat: dict[int, tuple[int, ...]] = {}

    def closed(v: int) -> bool:
        U = chosen[v]
        for a in A.arrows:
            if a.tail in chosen and a.head in chosen and (a.tail == v or a.head == v):
                Ut, Uh = chosen[a.tail], chosen[a.head]
                if Ut.shape[0] == 0:
                    continue
                img = (mats[a.name] @ Ut.T) % p  # columns = images
                if Uh.shape[0] == 0:
                    if img.any():
                        return False
                    continue
                stack = np.vstack([Uh, img.T])
                if rank_mod_p(stack, p) != Uh.shape[0]:
                    return False
        _ = U
        return True

    def dfs(i: int):
        if i == len(verts):
            found.append(Submodule(tuple(chosen[v].shape[0] for v in verts), tuple(pat[v] for v in verts)))
            return
        v = verts[i]
        for piv, B in cands[v]:
            steps[0] += 1
            if steps[0] > budget:
                raise EnumerationBudgetExceeded(f"submodule search exceeded the budget of {budget} steps")
            chosen[v] = B
            pat[v] = piv
            if closed(v):
                dfs(i + 1)
            del chosen[v]
            del pat[v]

    dfs(0)
    return found


@dataclass
class StabilityVerdict:
    status: str
    theta: Weight
    witnesses: list[dict]
    primes_used: list[int]
    primes_agree: bool
    warnings: list[str] = field(default_factory=list)
    submodule_dims: dict[int, list[list[int]]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "theta": [v for _, v in self.theta.theta],
            "witnesses": self.witnesses,
            "primes_used": self.primes_used,
            "primes_agree": self.primes_agree,
            "warnings": self.warnings,
            "submodule_dimension_vectors": {str(p): d for p, d in sorted(self.submodule_dims.items())},
            "note": "finite-field oracle: exact for good primes, heuristic otherwise",
        }


def _verdict_at(M: Representation, theta: Weight, p: int, budget: int):
    verts = list(M.algebra.vertices)
    full = M.dim_vector
    subs = enumerate_submodules(M, p, budget)
    status = "stable"
    witnesses = []
    if theta(M.dims) != 0:
        status = "unstable"
        witnesses.append({"prime": p, "dims": list(full), "pattern": None, "theta": theta(M.dims),
                          "reason": "theta(dim M) != 0"})
    for s in subs:
        dv = dict(zip(verts, s.dims))
        val = theta(dv)
        proper = 0 < sum(s.dims) < M.total_dim
        if val > 0:
            if status != "unstable" or len(witnesses) < 4:
                witnesses.append({"prime": p, "dims": list(s.dims), "pattern": [list(x) for x in s.pattern],
                                  "theta": val, "reason": "submodule with theta > 0"})
            status = "unstable"
        elif val == 0 and proper and status == "stable":
            witnesses.append({"prime": p, "dims": list(s.dims), "pattern": [list(x) for x in s.pattern],
                              "theta": 0, "reason": "proper submodule with theta = 0"})
            status = "semistable-not-stable"
    dimset = sorted({s.dims for s in subs})
    return status, witnesses, dimset


def _next_prime(n: int) -> int:
    k = n + 1
    while any(k % d == 0 for d in range(2, int(k ** 0.5) + 1)):
        k += 1
    return k


def check_stability_modp(M: Representation, theta: Weight, primes: Sequence[int] = DEFAULT_PRIMES,
                         dim_cap: int = DEFAULT_DIM_CAP, budget: int = DEFAULT_BUDGET) -> StabilityVerdict:
    if M.total_dim > dim_cap:
        raise EnumerationBudgetExceeded(f"total dimension {M.total_dim} exceeds dim_cap {dim_cap}")
    results = {}
    for p in primes:
        results[p] = _verdict_at(M, theta, p, budget)
    agree = len({(r[0], tuple(map(tuple, r[2]))) for r in results.values()}) == 1
    warnings = []
    used = list(primes)
    if not agree:
        q = _next_prime(max(primes))
        warnings.append(f"primes {list(primes)} disagree; consulted {q}")
        results[q] = _verdict_at(M, theta, q, budget)
        used.append(q)
    statuses = [results[p][0] for p in used]
    status = max(set(statuses), key=lambda s: (statuses.count(s), s == results[used[-1]][0]))
    witnesses = [w for p in used for w in results[p][1]]
    dims = {p: [list(d) for d in results[p][2]] for p in used}
    return StabilityVerdict(status, theta, witnesses, used, agree, warnings, dims)


@dataclass
class LemmaReport:
    is_schur: bool
    is_homogeneous: bool
    applicable: bool
    theta: Weight | None = None
    theta_of_dim: int | None = None
    verdict: StabilityVerdict | None = None

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return self.theta_of_dim == 0 and self.verdict is not None and self.verdict.status == "stable"

    def to_json(self) -> dict:
        out = {"is_schur": self.is_schur, "is_homogeneous": self.is_homogeneous, "applicable": self.applicable}
        if not self.applicable:
            out["result"] = "lemma not applicable"
        else:
            out["theta"] = [v for _, v in self.theta.theta]
            out["theta_of_dim"] = self.theta_of_dim
            out["stability"] = self.verdict.to_json()
            out["result"] = "holds" if self.holds else "FAILS"
        return out


def verify_lemma_homogeneous_schur(M: Representation, primes: Sequence[int] = DEFAULT_PRIMES) -> LemmaReport:
    schur = is_schur(M)
    homog = is_homogeneous(M)
    if not (schur and homog):
        return LemmaReport(schur, homog, False)
    theta = canonical_weight(M)
    verdict = check_stability_modp(M, theta, primes)
    return LemmaReport(schur, homog, True, theta, theta(M.dims), verdict)


def hom_pairing_weight(M: Representation, X: Representation) -> int:
    """dim Hom(M, X) - dim Hom(X, tau M); equals theta^M(dim X) over hereditary algebras."""
    return hom_dim(M, X) - hom_dim(X, ar_translate(M).module)
