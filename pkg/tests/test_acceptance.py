"""Acceptance suite: one check per criterion, each reported as a PASS/FAIL line.

Run under pytest (the lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import itertools
import json
import random
import sys
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from repvar.algebra import a2, butterfly, kronecker, truncated_loop
from repvar.cli import main, table_summands
from repvar.lambda_solver import KINDS, LambdaSpec, Summand, strata_types, stratum_dim
from repvar.lambda_solver import summand_to_representation
from repvar.lambda_solver.pointcount import fitted_dimension
from repvar.linalg import RationalMatrix
from repvar.rep import (
    Representation,
    end_dim,
    ext1_dim,
    hom_dim,
    is_isomorphic,
    is_local_endomorphism_algebra,
    is_schur,
    simple,
)
from repvar.schur import nondistributive_witness, verify_schur_family
from repvar.stability import canonical_weight, check_stability_modp, euler_form, is_homogeneous
from repvar.strings import (
    Band,
    band_family_end_dims,
    band_module,
    enumerate_bands,
    mf_check,
    rank_identity_check,
)

QA = Path(__file__).resolve().parents[1] / "src" / "repvar" / "data"
SWEEP_ARGS = ["lambda", "sweep", "--n", "3,4,5,6,7", "--max-total", "8", "--seeds", "5"]

RESULTS: dict[int, tuple[bool, str]] = {}
TITLES = {
    1: "table reproduction over the full sweep",
    2: "dense-orbit certification",
    3: "indecomposability of table entries",
    4: "Ext example and hereditary Euler form",
    5: "MF criterion on butterfly and Kronecker",
    6: "band rank identity and constant End",
    7: "homogeneous Schur band modules are stable",
    8: "non-distributive V_lambda family",
    9: "stratum dimension against point counts",
    10: "byte-identical JSON reports",
}


def _cli_bytes(argv: list[str]) -> str:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    if code != 0:
        raise RuntimeError(f"repvar {' '.join(argv)} exited with {code}")
    return buf.getvalue()


_SWEEP_CACHE: list[str] = []


def sweep_outputs() -> list[str]:
    """The full sweep report, produced twice (the second copy serves criterion 10)."""
    if not _SWEEP_CACHE:
        _SWEEP_CACHE.extend(_cli_bytes(SWEEP_ARGS) for _ in range(2))
    return _SWEEP_CACHE


def _table_row_ok(s: dict, n: int) -> bool:
    try:
        summand = Summand(s["kind"], tuple(s["params"]))
        summand.check_params(n)
    except Exception:
        return False
    return list(summand.dims) == s["dims"]


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_1() -> tuple[bool, str]:
    res = json.loads(sweep_outputs()[0])["result"]
    rows = res["table"]
    expected = sum(len(strata_types(d2, n)) for n in range(3, 8) for d1 in range(9) for d2 in range(9 - d1)
                   if d1 + d2)
    rows_ok = all(_table_row_ok(s, r["n"]) for r in rows for s in r["summands"])
    seeds_ok = all(r["seed_independent"] for r in rows)
    dims_ok = all(r["dims_sum_ok"] for r in rows)
    every_kind = all(res["kinds_seen"][k] > 0 for k in KINDS)
    ok = len(rows) == expected and rows_ok and seeds_ok and dims_ok and every_kind
    return ok, (f"{len(rows)}/{expected} strata, seed-independent={seeds_ok}, table rows={rows_ok}, "
                f"dims={dims_ok}, all 7 kinds produced={every_kind}")


def criterion_2() -> tuple[bool, str]:
    rows = json.loads(sweep_outputs()[0])["result"]["table"]
    bad = [r for r in rows if r["orbit_dim"] != r["stratum_dim"]]
    return not bad, f"{len(rows) - len(bad)}/{len(rows)} strata with orbit_dim == stratum_dim"


def criterion_3() -> tuple[bool, str]:
    checked = 0
    kinds = set()
    for n in range(3, 8):
        spec = LambdaSpec(n)
        for s in table_summands(n):
            M = summand_to_representation(s, spec)
            if not (M.check_relations() and is_local_endomorphism_algebra(M)):
                return False, f"{s.label()} at n={n} has a non-local End"
            checked += 1
            kinds.add(s.kind)
    # End of the three smallest entries by hand: (1,0) and (1,J1) are K; (0,J1) is K
    spec = LambdaSpec(3)
    oracle = {Summand("S1"): 1, Summand("D11"): 1, Summand("Jm_only", (1,)): 1}
    got = {s: end_dim(summand_to_representation(s, spec)) for s in oracle}
    ok = got == oracle and kinds == set(KINDS)
    verdict = "matches" if got == oracle else got
    return ok, f"{checked} entries local across all {len(kinds)} kinds; hand oracle {verdict}"


def _random_rep(Q, dims: dict[int, int], rng: random.Random) -> Representation:
    mats = {a.name: RationalMatrix([[rng.randint(-3, 3) for _ in range(dims[a.tail])] for _ in range(dims[a.head])],
                                   rows=dims[a.head], cols=dims[a.tail]) for a in Q.arrows}
    return Representation(Q, dims, mats)


def criterion_4() -> tuple[bool, str]:
    L = truncated_loop(2)
    loop_ext = ext1_dim(simple(L, 1), simple(L, 1))
    pairs = 0
    for Q in (a2(), kronecker()):
        rng = random.Random(f"euler:{Q.quiver.arrows}")
        dvs = [dict(zip((1, 2), d)) for d in itertools.product(range(4), repeat=2)]
        mods = [_random_rep(Q, d, rng) for d in dvs]
        for M, N in itertools.product(mods, mods):
            if hom_dim(M, N) - ext1_dim(M, N) != euler_form(Q, M.dims, N.dims):
                return False, f"Euler form fails at {M.dim_vector}, {N.dim_vector}"
            pairs += 1
    return loop_ext == 1, f"ext1(K,K) over K[x]/(x^2) = {loop_ext}; {pairs} hereditary pairs consistent"


def criterion_5() -> tuple[bool, str]:
    vb = mf_check(butterfly())
    tri = {c.arrows for c in vb.cycles if c.relation is not None}
    vk = mf_check(kronecker())
    band = Band.from_text(kronecker(), "b^-1 a")
    mods = [band_module(band, lam) for lam in range(1, 6)]
    schur = all(is_schur(m) for m in mods)
    noniso = not any(is_isomorphic(mods[i], mods[j]) for i in range(5) for j in range(i + 1, 5))
    ok = vb.is_mf and tri == {("a", "c", "e"), ("b", "d", "f")} and not vk.is_mf and schur and noniso
    return ok, (f"butterfly is_mf={vb.is_mf} with cycles {sorted(tri)}; kronecker is_mf={vk.is_mf}; "
                f"5 band modules at (1,1) Schur={schur}, pairwise non-isomorphic={noniso}")


def criterion_6() -> tuple[bool, str]:
    bands = [enumerate_bands(butterfly(), 12)[0], Band.from_text(kronecker(), "b^-1 a")]
    count = 0
    for b in bands:
        for lam in range(1, 6):
            if not rank_identity_check(band_module(b, lam)):
                return False, f"rank identity fails for {b} at lambda={lam}"
            count += 1
        if len(set(band_family_end_dims(b, range(1, 6)))) != 1:
            return False, f"End dimension varies along {b}"
    return True, f"rank identity on {count} band modules; End dimensions constant"


def criterion_7() -> tuple[bool, str]:
    mods = []
    for A in (butterfly(), kronecker()):
        for b in enumerate_bands(A, 8):
            mods.extend(band_module(b, lam) for lam in range(1, 11))
    tested = 0
    for M in mods:
        if not (is_schur(M) and is_homogeneous(M)):
            continue
        theta = canonical_weight(M)
        v = check_stability_modp(M, theta, (101, 103))
        if not v.primes_agree:
            return False, "primes 101 and 103 disagree"
        if theta(M.dims) != 0 or v.status != "stable":
            return False, f"module {M.dim_vector} is {v.status}"
        tested += 1
    ok = len(mods) >= 20 and tested > 0
    return ok, f"{len(mods)} band modules, {tested} Schur and homogeneous, all stable with primes agreeing"


def criterion_8() -> tuple[bool, str]:
    K = kronecker()
    w = nondistributive_witness(K)
    rep = verify_schur_family(K, w, range(11)) if w else None
    none_b = nondistributive_witness(butterfly()) is None
    none_a = nondistributive_witness(a2()) is None
    ok = bool(rep and rep.all_schur and rep.pairwise_non_isomorphic and rep.count == 11 and rep.dims) \
        and none_b and none_a
    return ok, (f"witness={w.to_json() if w else None}; {rep.count if rep else 0} Schur classes of dims "
                f"{rep.dims if rep else None}; butterfly/A2 witness-free={none_b and none_a}")


def criterion_9() -> tuple[bool, str]:
    checked = 0
    for n in (2, 3):
        for d1 in range(3):
            for d2 in range(4):
                for jt in strata_types(d2, n):
                    f, s = fitted_dimension(d1, jt), stratum_dim(d1, jt)
                    if f != s:
                        return False, f"n={n} d=({d1},{d2}) type {jt}: fitted {f} != {s}"
                    checked += 1
    return True, f"{checked} strata (n in 2..3, d1 <= 2, d2 <= 3) match the F_2/F_3 fit"


def criterion_10() -> tuple[bool, str]:
    a, b = sweep_outputs()
    argvs = [
        ["lambda", "decompose", "--n", "5", "--d1", "2", "--d2", "7", "--type", "5,2", "--seed", "7"],
        ["mf-check", str(QA / "butterfly.qa")],
        ["schur-scan", str(QA / "kronecker.qa"), "--dim", "1,1", "--budget", "20", "--seed", "1"],
        ["nondistributive", str(QA / "kronecker.qa")],
        ["bands", str(QA / "butterfly.qa"), "--max-len", "12"],
        ["analyze", str(QA / "lambda5.qa")],
    ]
    same = [a == b] + [_cli_bytes(v) == _cli_bytes(v) for v in argvs]
    return all(same), f"{sum(same)}/{len(same)} reports byte-identical across two runs"


CHECKS = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def _run(i: int) -> tuple[bool, str]:
    try:
        ok, detail = CHECKS[i]()
    except Exception as exc:  # a crash is a failure, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    RESULTS[i] = (ok, detail)
    return ok, detail


def format_line(i: int) -> str:
    ok, detail = RESULTS[i]
    return f"criterion {i:2d} {'PASS' if ok else 'FAIL'}  {TITLES[i]}: {detail}"


@pytest.mark.parametrize("i", range(1, 11))
def test_criterion(i):
    ok, detail = _run(i)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for i in CHECKS:
        _run(i)
        print(format_line(i), flush=True)
        failed += not RESULTS[i][0]
    sys.exit(1 if failed else 0)
