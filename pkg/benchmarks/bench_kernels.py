"""Compare the numba and numpy backends of the mod-p kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

The first numba call includes JIT compilation and is reported separately.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from repvar import _kernels
from repvar._kernels import power_rank_profiles, rank_mod_p


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    rng = np.random.default_rng(0)
    mats = [rng.integers(0, 101, size=(8, 8)) for _ in range(2000)]

    print(f"{'workload':<34}{'backend':<8}{'first call':>12}{'best':>12}")
    for label, make in [
        ("rank_mod_p, 2000 8x8 over F_101", lambda b: (lambda: [rank_mod_p(m, 101, backend=b) for m in mats])),
        ("power ranks, all 2x2 over F_3", lambda b: (lambda: power_rank_profiles(2, 3, backend=b))),
        ("power ranks, all 3x3 over F_2", lambda b: (lambda: power_rank_profiles(3, 2, backend=b))),
        ("power ranks, all 3x3 over F_3", lambda b: (lambda: power_rank_profiles(3, 3, backend=b))),
    ]:
        ref = None
        for b in backends:
            fn = make(b)
            t0 = time.perf_counter()
            out = fn()
            first = time.perf_counter() - t0
            best = _best(fn, args.repeat)
            res = np.asarray(out)
            if ref is None:
                ref = res
            elif not np.array_equal(ref, res):
                raise SystemExit(f"backends disagree on {label}")
            print(f"{label:<34}{b:<8}{first:>11.4f}s{best:>11.4f}s")


if __name__ == "__main__":
    main()
