"""Modular arithmetic kernels with an optional numba backend.

Exact rational work lives in :mod:`repvar.linalg`; the kernels here serve
the finite-field oracles (point counts of Jordan strata and submodule
enumeration), where the same small elimination runs millions of times.

Backend selection: set ``REPVAR_NUMBA=0`` to force the vectorised numpy
path.  Any other value (or unset) uses numba when it imports cleanly.
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("REPVAR_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:  # pragma: no cover - depends on the environment
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# scalar-loop kernels (compiled by numba)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _inv_mod(x, p):
    r = 1
    b = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


@njit(cache=True)
def _rank_loops(a, p):
    m, n = a.shape
    w = a.copy() % p
    r = 0
    for c in range(n):
        piv = -1
        for i in range(r, m):
            if w[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                t = w[r, j]
                w[r, j] = w[piv, j]
                w[piv, j] = t
        inv = _inv_mod(w[r, c], p)
        for j in range(n):
            w[r, j] = (w[r, j] * inv) % p
        for i in range(m):
            if i != r and w[i, c] != 0:
                f = w[i, c]
                for j in range(n):
                    w[i, j] = (w[i, j] - f * w[r, j]) % p
        r += 1
        if r == m:
            break
    return r


@njit(cache=True)
def _matmul_mod(a, b, p):
    m, k = a.shape
    n = b.shape[1]
    out = np.zeros((m, n), dtype=np.int64)
    for i in range(m):
        for t in range(k):
            if a[i, t] != 0:
                for j in range(n):
                    out[i, j] += a[i, t] * b[t, j]
    for i in range(m):
        for j in range(n):
            out[i, j] %= p
    return out


@njit(cache=True)
def _profiles_loops(k, q):
    # profile[idx, s] = rank of B^(s+1) for the idx-th matrix in base-q order
    total = q ** (k * k)
    out = np.zeros((total, k), dtype=np.int64)
    b = np.zeros((k, k), dtype=np.int64)
    for idx in range(total):
        x = idx
        for i in range(k):
            for j in range(k):
                b[i, j] = x % q
                x //= q
        pw = b.copy()
        for s in range(k):
            out[idx, s] = _rank_loops(pw, q)
            if s + 1 < k:
                pw = _matmul_mod(pw, b, q)
    return out


# ---------------------------------------------------------------------------
# vectorised numpy kernels
# ---------------------------------------------------------------------------

def _inverse_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    t[1:] = [pow(int(x), p - 2, p) for x in range(1, p)]
    return t


def _batch_rank_numpy(stack: np.ndarray, p: int) -> np.ndarray:
    """Ranks mod p of a stack of matrices, shape (N, m, n)."""
    w = np.array(stack, dtype=np.int64) % p
    nmat, m, n = w.shape
    inv = _inverse_table(p)
    rank = np.zeros(nmat, dtype=np.int64)
    rows = np.arange(m)
    allm = np.arange(nmat)
    for c in range(n):
        cand = (w[:, :, c] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        sel = allm[has]
        pr, rr = piv[has], rank[has]
        tmp = w[sel, pr].copy()
        w[sel, pr] = w[sel, rr]
        w[sel, rr] = tmp
        prow = (w[sel, rr] * inv[w[sel, rr, c]][:, None]) % p
        w[sel, rr] = prow
        f = w[sel, :, c].copy()
        f[np.arange(len(sel)), rr] = 0
        w[sel] = (w[sel] - f[:, :, None] * prow[:, None, :]) % p
        rank[has] += 1
    return rank


def _rank_numpy(a: np.ndarray, p: int) -> int:
    return int(_batch_rank_numpy(a[None, :, :], p)[0])


def _profiles_numpy(k: int, q: int, chunk: int = 1 << 16) -> np.ndarray:
    total = q ** (k * k)
    out = np.zeros((total, k), dtype=np.int64)
    weights = q ** np.arange(k * k, dtype=np.int64)
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % q
        b = digits.reshape(-1, k, k)
        pw = b.copy()
        for s in range(k):
            out[lo:lo + len(idx), s] = _batch_rank_numpy(pw, q)
            if s + 1 < k:
                pw = np.einsum("nij,njk->nik", pw, b) % q
    return out


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def rank_mod_p(a, p: int, backend: str | None = None) -> int:
    """Rank of an integer matrix over F_p."""
    arr = np.ascontiguousarray(np.asarray(a, dtype=np.int64))
    if arr.ndim != 2:
        raise ValueError("expected a 2-d array")
    if arr.size == 0:
        return 0
    if (backend or BACKEND) == "numba" and HAVE_NUMBA:
        return int(_rank_loops(arr, p))
    return _rank_numpy(arr, p)


def power_rank_profiles(k: int, q: int, backend: str | None = None) -> np.ndarray:
    """Rank of B, B^2, ..., B^k for every k x k matrix B over F_q.

    Row ``idx`` corresponds to the matrix whose entries, read row-major,
    are the base-q digits of ``idx`` (least significant first).
    """
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if (backend or BACKEND) == "numba" and HAVE_NUMBA:
        return _profiles_loops(k, q)
    return _profiles_numpy(k, q)
