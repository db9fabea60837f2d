"""Non-distributive layers, the V_lambda Schur families and Schur-module census."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import BoundQuiverAlgebra, Path
from .errors import AlgebraError, InvariantError
from .linalg import RationalMatrix
from .rep import (
    Representation,
    end_dim,
    indecomposable_projective,
    is_isomorphic,
    projective_basis,
)


@dataclass(frozen=True)
class NonDistributiveWitness:
    e: int
    f: int
    l: int
    v: Path
    w: Path

    def to_json(self) -> dict:
        return {"e": self.e, "f": self.f, "l": self.l, "v": str(self.v), "w": str(self.w)}


def layer_dim(A: BoundQuiverAlgebra, e: int, f: int, l: int) -> int:
    return len(A.paths_between(e, f, l))


def nondistributive_witness(A: BoundQuiverAlgebra) -> NonDistributiveWitness | None:
    """First (e, f, l) with at least two basis paths of length l from e to f."""
    if not A.is_triangular():
        raise AlgebraError("the layer criterion needs a triangular algebra (no oriented cycles); "
                           "non-triangular or non-monomial radical layers are out of scope")
    maxlen = max((len(p) for p in A.path_basis), default=0)
    for e in sorted(A.vertices):
        for f in sorted(A.vertices):
            for l in range(1, maxlen + 1):
                ps = A.paths_between(e, f, l)
                if len(ps) >= 2:
                    return NonDistributiveWitness(e, f, l, ps[0], ps[1])
    return None


def _check_witness(A: BoundQuiverAlgebra, wit: NonDistributiveWitness) -> None:
    for p in (wit.v, wit.w):
        if not A.in_basis(p) or p.tail != wit.e or p.head != wit.f or len(p) != wit.l:
            raise InvariantError(f"invalid witness path {p}")
    if wit.v == wit.w:
        raise InvariantError("witness paths must differ")


def schur_module(A: BoundQuiverAlgebra, wit: NonDistributiveWitness, lam) -> Representation:
    """V_lam = P(e) / <v - lam w, paths of length l+1 from e>."""
    _check_witness(A, wit)
    lam = Fraction(lam)
    P = indecomposable_projective(A, wit.e)
    basis = projective_basis(A, wit.e)
    gens: dict[int, list[list[Fraction]]] = {v: [] for v in A.vertices}
    fb = basis[wit.f]
    vec = [Fraction(0)] * len(fb)
    vec[fb.index(wit.v)] += 1
    vec[fb.index(wit.w)] -= lam
    gens[wit.f].append(vec)
    for v in A.vertices:
        for i, p in enumerate(basis[v]):
            if len(p) == wit.l + 1:
                gens[v].append([Fraction(int(k == i)) for k in range(len(basis[v]))])
    sub = P.subrep_closure(gens)
    return P.quotient(sub)


def schur_family(A: BoundQuiverAlgebra, wit: NonDistributiveWitness, lams: Iterable) -> list[Representation]:
    return [schur_module(A, wit, l) for l in lams]


@dataclass
class SchurFamilyReport:
    applicable: bool
    witness: NonDistributiveWitness | None = None
    lambdas: list[str] = field(default_factory=list)
    dims: list[int] | None = None
    all_schur: bool = False
    pairwise_non_isomorphic: bool = False
    count: int = 0

    def to_json(self) -> dict:
        if not self.applicable:
            return {"applicable": False, "result": "not applicable (no non-distributive layer)"}
        return {
            "applicable": True,
            "witness": self.witness.to_json(),
            "lambdas": self.lambdas,
            "dims": self.dims,
            "all_schur": self.all_schur,
            "pairwise_non_isomorphic": self.pairwise_non_isomorphic,
            "schur_classes": self.count,
            "note": "lower bound on the number of Schur modules of this dimension vector",
        }


def verify_schur_family(A: BoundQuiverAlgebra, wit: NonDistributiveWitness | None,
                        lams: Sequence) -> SchurFamilyReport:
    if wit is None:
        return SchurFamilyReport(False)
    mods = schur_family(A, wit, lams)
    dimset = {m.dim_vector for m in mods}
    schur = all(end_dim(m) == 1 for m in mods)
    noniso = all(not is_isomorphic(mods[i], mods[j]) for i in range(len(mods)) for j in range(i + 1, len(mods)))
    count = len(mods) if (schur and noniso) else len(_bucket(mods))
    return SchurFamilyReport(True, wit, [str(Fraction(l)) for l in lams],
                             list(mods[0].dim_vector) if len(dimset) == 1 else None, schur, noniso, count)


def _bucket(mods: Sequence[Representation]) -> list[Representation]:
    reps: list[Representation] = []
    for m in mods:
        if end_dim(m) == 1 and not any(is_isomorphic(m, r) for r in reps):
            reps.append(m)
    return reps


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------

def _radical_quotients(A: BoundQuiverAlgebra, v: int) -> list[Representation]:
    P = indecomposable_projective(A, v)
    basis = projective_basis(A, v)
    depth = max(len(p) for ps in basis.values() for p in ps)
    out = []
    for k in range(1, depth + 1):
        gens = {w: [[Fraction(int(j == i)) for j in range(len(ps))] for i, p in enumerate(ps) if len(p) >= k]
                for w, ps in basis.items()}
        out.append(P.quotient(gens))
    return out


def _finite_candidates(A: BoundQuiverAlgebra, d: Mapping[int, int]):
    total = sum(d.values())
    for v in A.vertices:
        P = indecomposable_projective(A, v)
        if P.dims == d:
            yield f"P({v})", P
        for k, Q in enumerate(_radical_quotients(A, v), start=1):
            if Q.dims == d:
                yield f"P({v})/rad^{k}", Q
    from .strings import enumerate_strings, is_string_algebra, string_module

    if is_string_algebra(A).is_string and total >= 1:
        for s in enumerate_strings(A, total - 1):
            if len(s.letters) + 1 != total:
                continue
            M = string_module(s)
            if M.dims == d:
                yield f"string {s}", M


def _lambda_n(A: BoundQuiverAlgebra) -> int | None:
    from .algebra import lambda_algebra

    if set(A.vertices) != {1, 2} or len(A.arrows) != 2:
        return None
    for n in range(2, A.path_length_cap):
        try:
            if lambda_algebra(n) == A:
                return n
        except AlgebraError:
            return None
        if n > len(A.path_basis):
            break
    return None


def _family_streams(A: BoundQuiverAlgebra, d: Mapping[int, int], seed: int):
    streams = []
    total = sum(d.values())
    from .strings import band_module, enumerate_bands, is_string_algebra

    if is_string_algebra(A).is_string and total >= 2:
        for b in enumerate_bands(A, total):
            if band_module(b, 1).dims == d:
                def gen(b=b):
                    k = 1
                    while True:
                        yield f"band {b} lambda={k}", band_module(b, k)
                        k += 1
                streams.append(gen())
    if A.is_triangular():
        wit = nondistributive_witness(A)
        if wit is not None and schur_module(A, wit, 0).dims == d:
            def vgen(wit=wit):
                k = 0
                while True:
                    yield f"V_lambda lambda={k}", schur_module(A, wit, k)
                    k += 1
            streams.append(vgen())
    n = _lambda_n(A)
    if n is not None:
        from .lambda_solver import KINDS, LambdaSpec, Summand, summand_to_representation

        spec = LambdaSpec(n)
        table = []
        for kind in KINDS:
            for m in range(0, n + 1):
                for N in range(0, n + 1):
                    params = {0: (), 1: (m,), 2: (m, N)}[
                        {"S1": 0, "D11": 0, "Jm_only": 1, "D1m": 1, "D2m": 1, "D1_1plusN": 1, "D2_mplusN": 2}[kind]]
                    if (len(params) < 2 and N) or (not params and m):
                        continue
                    s = Summand(kind, params)
                    try:
                        s.check_params(n)
                    except InvariantError:
                        continue
                    if s.dims == (d[1], d[2]):
                        table.append(s)
        if table:
            streams.append(iter([(f"table {s.label()}", summand_to_representation(s, spec)) for s in table]))
        from .lambda_solver import generic_stratum_point, strata_types

        types = strata_types(d[2], n)

        def sgen():
            k = 0
            while True:
                for jt in types:
                    P = generic_stratum_point(d[1], jt, seed * 1000 + k, spec)
                    yield f"stratum {jt} generic seed={seed * 1000 + k}", P.to_representation()
                k += 1
        streams.append(sgen())
    if not A.relations:
        def rgen():
            rng = random.Random(f"schur-scan:{seed}")
            k = 0
            while True:
                mats = {a.name: RationalMatrix([[rng.randint(-3, 3) for _ in range(d[a.tail])]
                                                for _ in range(d[a.head])], rows=d[a.head], cols=d[a.tail])
                        for a in A.arrows}
                k += 1
                yield f"random sample {k}", Representation(A, d, mats, check=False)
        streams.append(rgen())
    return streams


@dataclass
class SchurCensus:
    dims: list[int]
    budget: int
    candidates_tested: int
    classes: list[dict]

    @property
    def count(self) -> int:
        return len(self.classes)

    def to_json(self) -> dict:
        return {
            "dims": self.dims,
            "budget": self.budget,
            "candidates_tested": self.candidates_tested,
            "schur_classes_found": self.count,
            "classes": self.classes,
            "claim": "lower bound only; no further classes found within budget does not imply finiteness",
        }


def schur_scan(A: BoundQuiverAlgebra, d: Mapping[int, int], budget: int, seed: int = 0) -> SchurCensus:
    d = {v: int(d.get(v, 0)) for v in A.vertices}
    reps: list[tuple[str, Representation]] = []
    tested = 0

    def consider(label: str, M: Representation) -> None:
        nonlocal tested
        tested += 1
        if M.is_zero() or not M.check_relations():
            return
        if end_dim(M) != 1:
            return
        if any(is_isomorphic(M, R) for _, R in reps):
            return
        reps.append((label, M))

    if sum(d.values()) and budget > 0:
        for label, M in _finite_candidates(A, d):
            if tested >= budget:
                break
            consider(label, M)
        streams = _family_streams(A, d, seed)
        while streams and tested < budget:
            alive = []
            for s in streams:
                if tested >= budget:
                    alive.append(s)
                    break
                try:
                    label, M = next(s)
                except StopIteration:
                    continue
                consider(label, M)
                alive.append(s)
            streams = alive if tested < budget else streams
    classes = [{"source": label, "end_dim": 1} for label, _ in reps]
    return SchurCensus([d[v] for v in A.vertices], budget, tested, classes)
