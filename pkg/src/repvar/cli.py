"""Command-line front end.  Every command prints one deterministic JSON report."""

from __future__ import annotations

import argparse
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Callable, Sequence

from . import __version__
from .algebra import BoundQuiverAlgebra, load_algebra
from .errors import InvariantError, OracleDisagreement, ParseError, RepvarError
from .linalg import fraction_str
from .report import file_digest, make_report, to_json, to_markdown
from .rep import Representation, end_dim, ext1_dim, hom_dim, is_local_endomorphism_algebra, load_representation


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _lambda_values(text: str) -> list[Fraction]:
    """`0..10` or a comma list of rationals."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            return [Fraction(k) for k in range(int(lo), int(hi) + 1)]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    try:
        return [Fraction(x) for x in text.split(",") if x]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad lambda list {text!r}") from None


def _threads() -> int:
    raw = os.environ.get("REPVAR_THREADS", "")
    try:
        cap = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        cap = 1
    return max(1, cap)


def _file_input(path: str) -> dict:
    p = FsPath(path)
    if not p.is_file():
        raise ParseError(f"no such file: {path}")
    return {"path": path, "sha256": file_digest(p)}


def _load_qa(path: str) -> BoundQuiverAlgebra:
    _file_input(path)
    return load_algebra(path)


def _load_rep(path: str, check: bool = True) -> Representation:
    _file_input(path)
    return load_representation(path, check=check)


def _dims_json(M: Representation) -> list[int]:
    return list(M.dim_vector)


# ---------------------------------------------------------------------------
# commands: each returns (inputs, result, warnings, exit_code)
# ---------------------------------------------------------------------------

def cmd_validate(args) -> tuple:
    inputs = {"file": _file_input(args.path)}
    if args.path.endswith(".qa"):
        A = load_algebra(args.path)
        return inputs, {"kind": "algebra", "valid": True, "vertices": sorted(A.vertices),
                        "arrows": len(A.arrows), "relations": [str(r) for r in A.relations]}, [], 0
    M = load_representation(args.path, check=False)
    bad = [str(r) for r in M.violated_relations()]
    result = {"kind": "representation", "valid": not bad, "dims": _dims_json(M), "violated_relations": bad}
    return inputs, result, [f"relation {r} does not vanish" for r in bad], (InvariantError.exit_code if bad else 0)


def cmd_analyze(args) -> tuple:
    from .strings import is_string_algebra

    A = _load_qa(args.path)
    sv = is_string_algebra(A)
    result = {
        "vertices": sorted(A.vertices),
        "arrows": len(A.arrows),
        "triangular": A.is_triangular(),
        "connected": A.is_connected(),
        "string": sv.is_string,
        "string_detail": sv.to_json(),
        "dim": A.dim,
        "path_basis_size": len(A.path_basis),
    }
    return {"file": _file_input(args.path)}, result, [], 0


def cmd_lambda_decompose(args) -> tuple:
    from .lambda_solver import JordanType, LambdaSpec, orbit_dim_of_sum, stratum_dim
    from .lambda_solver.canonical import decompose

    spec = LambdaSpec(args.n)
    jt = JordanType.parse(args.type) if args.type else JordanType(())
    if jt.d2 != args.d2:
        raise InvariantError(f"Jordan type {jt} has size {jt.d2}, expected d2 = {args.d2}")
    if jt.parts and jt.largest > args.n:
        raise InvariantError(f"Jordan blocks larger than n = {args.n} violate b^n = 0")
    dec, attempts = decompose(args.d1, jt, args.seed, spec)
    od = orbit_dim_of_sum(dec.summands, spec)
    sd = stratum_dim(args.d1, jt)
    result = {
        "d": [args.d1, args.d2],
        "type": list(jt.parts),
        "summands": [s.to_json() for s in dec.summands],
        "orbit_dim": od,
        "stratum_dim": sd,
        "dense_orbit": od == sd,
        "attempts": attempts,
        "certificate_ok": dec.verify_certificate(),
    }
    warnings = [f"resampled {attempts - 1} time(s) after non-generic draws"] if attempts > 1 else []
    inputs = {"n": args.n, "d1": args.d1, "d2": args.d2, "type": list(jt.parts), "seed": args.seed}
    return inputs, result, warnings, 0


def _sweep_job(job: tuple[int, int, tuple[int, ...], tuple[int, ...]]) -> dict:
    from .lambda_solver import JordanType, LambdaSpec, orbit_dim_of_sum, stratum_dim
    from .lambda_solver.canonical import decompose

    n, d1, parts, seeds = job
    spec = LambdaSpec(n)
    jt = JordanType(parts)
    multisets = []
    attempts = []
    certs = True
    for s in seeds:
        dec, k = decompose(d1, jt, s, spec)
        multisets.append(dec.summands)
        attempts.append(k)
        certs = certs and dec.verify_certificate()
    first = multisets[0]
    od = orbit_dim_of_sum(first, spec)
    sd = stratum_dim(d1, jt)
    dims_ok = all(tuple(map(sum, zip(*(x.dims for x in ms)))) == (d1, jt.d2) if ms else (d1, jt.d2) == (0, 0)
                  for ms in multisets)
    return {
        "n": n,
        "d": [d1, jt.d2],
        "type": list(parts),
        "summands": [x.to_json() for x in first],
        "seed_independent": all(ms == first for ms in multisets),
        "dims_sum_ok": dims_ok,
        "orbit_dim": od,
        "stratum_dim": sd,
        "dense_orbit": od == sd,
        "certificates_ok": certs,
        "max_attempts": max(attempts),
    }


def sweep_jobs(ns: Sequence[int], max_total: int, seeds: Sequence[int]) -> list[tuple]:
    from .lambda_solver import strata_types

    jobs = []
    for n in ns:
        for d1 in range(max_total + 1):
            for d2 in range(max_total + 1 - d1):
                if d1 + d2 == 0:
                    continue
                for jt in strata_types(d2, n):
                    jobs.append((n, d1, jt.parts, tuple(seeds)))
    return jobs


def run_sweep(ns: Sequence[int], max_total: int, seeds: Sequence[int], workers: int = 1) -> dict:
    from .lambda_solver import KINDS

    jobs = sweep_jobs(ns, max_total, seeds)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_sweep_job, jobs, chunksize=8))
    else:
        rows = [_sweep_job(j) for j in jobs]
    kinds = Counter(s["kind"] for r in rows for s in r["summands"])
    return {
        "strata": len(rows),
        "all_dense": all(r["dense_orbit"] for r in rows),
        "all_seed_independent": all(r["seed_independent"] for r in rows),
        "all_dims_sum_ok": all(r["dims_sum_ok"] for r in rows),
        "all_certificates_ok": all(r["certificates_ok"] for r in rows),
        "kinds_seen": {k: kinds.get(k, 0) for k in KINDS},
        "table": rows,
    }


def cmd_lambda_sweep(args) -> tuple:
    ns = args.n
    seeds = [args.seed + i for i in range(args.seeds)]
    result = run_sweep(ns, args.max_total, seeds, _threads())
    warnings = []
    missing = [k for k, c in result["kinds_seen"].items() if not c]
    if missing:
        warnings.append("table rows not produced in this range: " + ", ".join(missing))
    inputs = {"n": ns, "max_total": args.max_total, "seeds": seeds}
    ok = result["all_dense"] and result["all_seed_independent"] and result["all_dims_sum_ok"]
    return inputs, result, warnings, 0 if ok else InvariantError.exit_code


def table_summands(n: int):
    from .lambda_solver import Summand

    out = [Summand("S1"), Summand("D11")]
    out += [Summand("Jm_only", (m,)) for m in range(1, n + 1)]
    out += [Summand("D1m", (m,)) for m in range(2, n + 1)]
    out += [Summand("D2m", (m,)) for m in range(2, n + 1)]
    out += [Summand("D1_1plusN", (N,)) for N in range(3, n + 1)]
    out += [Summand("D2_mplusN", (m, N)) for m in range(2, n + 1) for N in range(m + 2, n + 1)]
    return out


def cmd_lambda_table(args) -> tuple:
    from .lambda_solver import LambdaSpec, summand_to_representation

    spec = LambdaSpec(args.n)
    rows = []
    for s in table_summands(args.n):
        M = summand_to_representation(s, spec)
        rows.append({**s.to_json(), "a": M.matrices["a"].to_strings(), "end_dim": end_dim(M),
                     "local_end": is_local_endomorphism_algebra(M), "relations_ok": M.check_relations()})
    return {"n": args.n}, {"rows": rows, "all_local": all(r["local_end"] for r in rows)}, [], 0


def cmd_mf(args) -> tuple:
    from .strings import mf_check

    A = _load_qa(args.path)
    return {"file": _file_input(args.path)}, mf_check(A).to_json(), [], 0


def cmd_bands(args) -> tuple:
    from .strings import band_family_end_dims, band_module, enumerate_bands, nilpotent_endo_report, \
        rank_identity_check

    A = _load_qa(args.path)
    lam = Fraction(args.lam)
    bands = enumerate_bands(A, args.max_len)
    rows = []
    for k, b in enumerate(bands):
        M = band_module(b, lam)
        row = {"band": str(b), "length": len(b), "dims": _dims_json(M), "end_dim": end_dim(M),
               "rank_identity": rank_identity_check(M),
               "end_dims_lambda_1_to_5": band_family_end_dims(b, range(1, 6)),
               "nilpotent_endo": nilpotent_endo_report(b, lam).to_json()}
        if args.export:
            out = FsPath(args.export)
            out.mkdir(parents=True, exist_ok=True)
            name = f"band{k}_lambda{fraction_str(lam).replace('/', '_')}.rep.json"
            (out / name).write_text(M.to_json(), encoding="utf-8")
            row["exported"] = name
        rows.append(row)
    inputs = {"file": _file_input(args.path), "max_len": args.max_len, "lambda": fraction_str(lam)}
    return inputs, {"count": len(rows), "bands": rows}, [], 0


def cmd_stability(args) -> tuple:
    from .stability import DEFAULT_PRIMES, Weight, canonical_weight, check_stability_modp, is_homogeneous
    from .rep import is_schur

    M = _load_rep(args.path)
    verts = sorted(M.algebra.vertices)
    if args.theta is not None:
        theta = Weight.parse(args.theta, verts)
        source = "given"
    else:
        theta = canonical_weight(M)
        source = "canonical"
    primes = args.primes or list(DEFAULT_PRIMES)
    v = check_stability_modp(M, theta, primes, dim_cap=args.dim_cap)
    result = {"theta_source": source, "dims": _dims_json(M), "is_schur": is_schur(M),
              "is_homogeneous": is_homogeneous(M), **v.to_json()}
    inputs = {"file": _file_input(args.path), "primes": primes, "dim_cap": args.dim_cap,
              "theta": theta.as_list(verts) if args.theta is not None else None}
    code = 0 if v.primes_agree else OracleDisagreement.exit_code
    return inputs, result, list(v.warnings), code


def cmd_schur_scan(args) -> tuple:
    from .schur import schur_scan

    A = _load_qa(args.path)
    verts = sorted(A.vertices)
    if len(args.dim) != len(verts):
        raise InvariantError(f"--dim needs {len(verts)} entries, one per vertex {verts}")
    census = schur_scan(A, dict(zip(verts, args.dim)), args.budget, args.seed)
    inputs = {"file": _file_input(args.path), "dim": args.dim, "budget": args.budget, "seed": args.seed}
    return inputs, census.to_json(), [], 0


def cmd_nondistributive(args) -> tuple:
    from .schur import nondistributive_witness, verify_schur_family

    A = _load_qa(args.path)
    wit = nondistributive_witness(A)
    rep = verify_schur_family(A, wit, args.lambdas)
    inputs = {"file": _file_input(args.path), "lambdas": [fraction_str(x) for x in args.lambdas]}
    return inputs, rep.to_json(), [], 0


def cmd_hom(args) -> tuple:
    M = _load_rep(args.m)
    N = _load_rep(args.n)
    inputs = {"m": _file_input(args.m), "n": _file_input(args.n)}
    result = {"dim_hom": hom_dim(M, N), "dim_hom_reverse": hom_dim(N, M), "end_dim_m": end_dim(M),
              "end_dim_n": end_dim(N)}
    return inputs, result, [], 0


def cmd_ext(args) -> tuple:
    M = _load_rep(args.m)
    N = _load_rep(args.n)
    inputs = {"m": _file_input(args.m), "n": _file_input(args.n)}
    return inputs, {"ext1_dim": ext1_dim(M, N), "dim_hom": hom_dim(M, N)}, [], 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--md", dest="fmt", action="store_const", const="md", help="markdown rendering")
    common.add_argument("--output", "-o", help="write the report to this file instead of stdout")

    p = argparse.ArgumentParser(prog="repvar", description=__doc__)
    p.add_argument("--version", action="version", version=f"repvar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func, command_name=name)
        return sp

    sp = add("validate", cmd_validate, "parse and check a .qa or .rep.json file")
    sp.add_argument("path")
    sp = add("analyze", cmd_analyze, "structural facts about an algebra")
    sp.add_argument("path")

    lp = sub.add_parser("lambda", help="generic decompositions over Lambda_n")
    lsub = lp.add_subparsers(dest="lambda_command", required=True)
    dp = lsub.add_parser("decompose", parents=[common])
    dp.set_defaults(func=cmd_lambda_decompose, command_name="lambda decompose")
    dp.add_argument("--n", type=int, required=True)
    dp.add_argument("--d1", type=int, required=True)
    dp.add_argument("--d2", type=int, required=True)
    dp.add_argument("--type", default="", help="Jordan type, e.g. 5,2")
    dp.add_argument("--seed", type=int, default=0)
    swp = lsub.add_parser("sweep", parents=[common])
    swp.set_defaults(func=cmd_lambda_sweep, command_name="lambda sweep")
    swp.add_argument("--n", type=_int_list, required=True, help="one value or a comma list")
    swp.add_argument("--max-total", type=int, default=8)
    swp.add_argument("--seeds", type=int, default=5)
    swp.add_argument("--seed", type=int, default=0)
    tp = lsub.add_parser("table", parents=[common])
    tp.set_defaults(func=cmd_lambda_table, command_name="lambda table")
    tp.add_argument("--n", type=int, required=True)

    sp = add("mf-check", cmd_mf, "multiplicity-free criterion for a string algebra")
    sp.add_argument("path")
    sp = add("bands", cmd_bands, "enumerate bands and their modules")
    sp.add_argument("path")
    sp.add_argument("--max-len", type=int, default=12)
    sp.add_argument("--lambda", dest="lam", default="1")
    sp.add_argument("--export", help="directory receiving one .rep.json per band")
    sp = add("stability", cmd_stability, "King stability via the finite-field oracle")
    sp.add_argument("path")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta")
    g.add_argument("--canonical", action="store_true")
    sp.add_argument("--primes", type=_int_list)
    sp.add_argument("--dim-cap", type=int, default=10)
    sp = add("schur-scan", cmd_schur_scan, "lower-bound census of Schur modules")
    sp.add_argument("path")
    sp.add_argument("--dim", type=_int_list, required=True)
    sp.add_argument("--budget", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("nondistributive", cmd_nondistributive, "non-distributive layer and the V_lambda family")
    sp.add_argument("path")
    sp.add_argument("--lambdas", type=_lambda_values, default=_lambda_values("0..10"))
    sp = add("hom", cmd_hom, "dimension of Hom(M, N)")
    sp.add_argument("m")
    sp.add_argument("n")
    sp = add("ext", cmd_ext, "dimension of Ext^1(M, N)")
    sp.add_argument("m")
    sp.add_argument("n")
    return p


def _emit(report: dict, fmt: str | None, output: str | None) -> None:
    text = to_markdown(report) if fmt == "md" else to_json(report)
    if output:
        FsPath(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _error_inputs(args) -> dict:
    out = {}
    for key in ("path", "m", "n"):
        val = getattr(args, key, None)
        if isinstance(val, str) and FsPath(val).is_file():
            out[key if key != "path" else "file"] = {"path": val, "sha256": file_digest(val)}
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    name = args.command_name
    try:
        inputs, result, warnings, code = args.func(args)
    except RepvarError as exc:
        report = make_report(name, _error_inputs(args), None, [])
        report["error"] = {"type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        _emit(report, args.fmt, args.output)
        print(f"repvar: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"repvar: {exc}", file=sys.stderr)
        return ParseError.exit_code
    _emit(make_report(name, inputs, result, warnings), args.fmt, args.output)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
