"""Hot inner loops: row reduction, batched brackets and matrix products over GF(q).

Each kernel has two implementations operating on integer code arrays and the
field's lookup tables:

* a loop version compiled with ``numba.njit`` (default when numba imports), and
* a vectorised pure-numpy version.

Set ``TWHEIS_DISABLE_NUMBA=1`` before import, or call :func:`set_backend`, to
force the numpy path.  Both paths return bit-identical results.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
_backend = "numba" if NUMBA_AVAILABLE and os.environ.get(
    "TWHEIS_DISABLE_NUMBA", "0").lower() in ("0", "", "false", "no") else "numpy"


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    _backend = name


def get_backend() -> str:
    return _backend


def _njit(fn):
    if NUMBA_AVAILABLE:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


# -- numba loop kernels -------------------------------------------------------

@_njit
def _rref_loops(M, add, mul, neg, inv):
    R = M.copy()
    rows, cols = R.shape
    piv = np.empty(min(rows, cols), np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        s = -1
        for i in range(r, rows):
            if R[i, c] != 0:
                s = i
                break
        if s < 0:
            continue
        if s != r:
            for j in range(cols):
                t = R[r, j]
                R[r, j] = R[s, j]
                R[s, j] = t
        f = inv[R[r, c]]
        for j in range(c, cols):
            R[r, j] = mul[f, R[r, j]]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                g = neg[R[i, c]]
                for j in range(c, cols):
                    if R[r, j] != 0:
                        R[i, j] = add[R[i, j], mul[g, R[r, j]]]
        piv[r] = c
        r += 1
    return R, piv[:r]


@_njit
def _bracket_loops(G, H, I, J, K, C, add, mul, neg):
    N, n = G.shape
    out = np.zeros((N, n), np.int64)
    for t in range(I.shape[0]):
        i, j, k, c = I[t], J[t], K[t], C[t]
        for s in range(N):
            x = add[mul[G[s, i], H[s, j]], neg[mul[G[s, j], H[s, i]]]]
            if x != 0:
                out[s, k] = add[out[s, k], mul[c, x]]
    return out


@_njit
def _matmul_loops(A, B, add, mul):
    n, m = A.shape
    l = B.shape[1]
    out = np.zeros((n, l), np.int64)
    for i in range(n):
        for k in range(m):
            a = A[i, k]
            if a == 0:
                continue
            for j in range(l):
                b = B[k, j]
                if b != 0:
                    out[i, j] = add[out[i, j], mul[a, b]]
    return out


# -- numpy kernels --------------------------------------------------------------

def _rref_numpy(M, F):
    R = M.copy()
    rows, cols = R.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        s = r + nz[0]
        if s != r:
            R[[r, s]] = R[[s, r]]
        R[r] = F.mul_t[F.inv_t[R[r, c]], R[r]]
        f = F.neg_t[R[:, c]]
        f[r] = 0
        R = F.add_t[R, F.mul_t[f[:, None], R[r][None, :]]]
        piv.append(c)
        r += 1
    return R, np.array(piv, dtype=np.int64)


def _bracket_numpy(G, H, I, J, K, C, F, n):
    x = F.sub(F.mul(G[:, I], H[:, J]), F.mul(G[:, J], H[:, I]))
    return F.scatter_sum(F.mul(x, C[None, :]), K, n)


# -- dispatch -----------------------------------------------------------------

def rref(F, M):
    """Reduced row echelon form with first-nonzero pivoting; returns (R, pivots)."""
    M = np.ascontiguousarray(M, dtype=np.int64)
    if M.size == 0:
        return M.copy(), np.zeros(0, dtype=np.int64)
    if _backend == "numba":
        return _rref_loops(M, F.add_t, F.mul_t, F.neg_t, F.inv_t)
    return _rref_numpy(M, F)


def bracket_batch(F, G, H, terms, n):
    """Row-wise bracket of (N, n) coordinate arrays given sparse structure ``terms``.

    ``terms = (I, J, K, C)`` lists every nonzero ``[e_I, e_J]`` coefficient
    ``C`` on ``e_K`` with ``I < J``.
    """
    G = np.ascontiguousarray(G, dtype=np.int64)
    H = np.ascontiguousarray(H, dtype=np.int64)
    I, J, K, C = terms
    if I.shape[0] == 0:
        return np.zeros((G.shape[0], n), dtype=np.int64)
    if _backend == "numba":
        return _bracket_loops(G, H, I, J, K, C, F.add_t, F.mul_t, F.neg_t)
    return _bracket_numpy(G, H, I, J, K, C, F, n)


def matmul(F, A, B):
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if _backend == "numba":
        return _matmul_loops(A, B, F.add_t, F.mul_t)
    return F.einsum("ik,kj->ij", A, B)
