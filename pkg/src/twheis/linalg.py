"""Dense exact linear algebra over a :class:`~twheis.field.FiniteField`.

Matrices are ``int64`` arrays of field codes.  Vectors are stored as rows, so
a :class:`Subspace` basis is a ``(dim, ambient_dim)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .field import FiniteField


class ContainmentError(ArithmeticError):
    """A subspace expected to contain another does not (d o d != 0 upstream)."""


@dataclass(frozen=True)
class Subspace:
    field: FiniteField
    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v) -> bool:
        v = np.atleast_2d(np.asarray(v, dtype=np.int64))
        return rank(self.field, np.vstack([self.basis, v])) == self.dim

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(F: FiniteField, M) -> tuple[np.ndarray, tuple[int, ...], int]:
    """Return ``(R, pivot_columns, rank)``; pivoting takes the first nonzero entry."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    R, piv = kernels.rref(F, M)
    return R, tuple(int(c) for c in piv), len(piv)


def rank(F: FiniteField, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return rref(F, M)[2]


def span(F: FiniteField, vectors, ambient_dim: int | None = None) -> Subspace:
    vectors = np.asarray(vectors, dtype=np.int64)
    if ambient_dim is None:
        ambient_dim = vectors.shape[1]
    vectors = vectors.reshape(-1, ambient_dim)
    R, _, r = rref(F, vectors) if vectors.size else (vectors, (), 0)
    return Subspace(F, ambient_dim, R[:r].copy())


def kernel_basis(F: FiniteField, M) -> Subspace:
    """Basis of ``{v : M v = 0}`` in reduced echelon form."""
    M = np.asarray(M, dtype=np.int64)
    rows, cols = M.shape
    if rows == 0:
        return Subspace(F, cols, identity(cols))
    R, piv, r = rref(F, M)
    free = [c for c in range(cols) if c not in set(piv)]
    K = zeros(len(free), cols)
    for t, f in enumerate(free):
        K[t, f] = 1
        for row, pc in enumerate(piv):
            K[t, pc] = F.neg(R[row, f])
    return span(F, K, cols)


def image_basis(F: FiniteField, M) -> Subspace:
    """Basis of the column span of ``M``."""
    M = np.asarray(M, dtype=np.int64)
    return span(F, M.T, M.shape[0])


def quotient_basis(F: FiniteField, K: Subspace, I: Subspace) -> np.ndarray:
    """Rows of ``K.basis`` completing a basis of ``I`` to one of ``K``.

    The first K-vectors that raise the rank of ``[I; chosen]`` are taken, so
    the result is deterministic for fixed echelon forms.
    """
    if rank(F, np.vstack([K.basis, I.basis])) != K.dim:
        raise ContainmentError("image is not contained in kernel")
    stacked = np.vstack([I.basis, K.basis]).T
    _, piv, _ = rref(F, stacked) if stacked.size else (None, (), 0)
    chosen = [c - I.dim for c in piv if c >= I.dim]
    return K.basis[chosen].copy() if chosen else zeros(0, K.ambient_dim)


def matmul(F: FiniteField, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.size == 0 or B.size == 0:
        return zeros(A.shape[0], B.shape[1])
    return kernels.matmul(F, A, B)


def matvec(F: FiniteField, A, v) -> np.ndarray:
    return matmul(F, A, np.asarray(v, dtype=np.int64)[:, None])[:, 0]


def matpow(F: FiniteField, A, e: int) -> np.ndarray:
    result = identity(A.shape[0])
    base = np.asarray(A, dtype=np.int64)
    while e:
        if e & 1:
            result = matmul(F, result, base)
        base = matmul(F, base, base)
        e >>= 1
    return result


def solve(F: FiniteField, A, b) -> np.ndarray | None:
    """One solution of ``A x = b`` or ``None`` when inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    aug = np.hstack([A, b[:, None]])
    R, piv, _ = rref(F, aug)
    cols = A.shape[1]
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(piv):
        x[pc] = R[row, cols]
    return x


def is_invertible(F: FiniteField, A) -> bool:
    A = np.asarray(A, dtype=np.int64)
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def inverse(F: FiniteField, A) -> np.ndarray:
    n = A.shape[0]
    R, piv, r = rref(F, np.hstack([A, identity(n)]))
    if r < n or piv[:n] != tuple(range(n)):
        raise ArithmeticError("matrix is singular")
    return R[:, n:].copy()


def coordinates_modulo(F: FiniteField, reps, sub: Subspace, v) -> np.ndarray:
    """Coefficients ``c`` with ``v - sum c_i reps_i`` in ``sub``."""
    reps = np.asarray(reps, dtype=np.int64).reshape(-1, sub.ambient_dim)
    M = np.vstack([sub.basis, reps]).T
    x = solve(F, M, v)
    if x is None:
        raise ContainmentError("vector not in span of representatives and subspace")
    return x[sub.dim:]
