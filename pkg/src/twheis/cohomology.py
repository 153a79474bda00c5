"""Low-degree Chevalley-Eilenberg cohomology with trivial coefficients.

Cochains are coordinate vectors in the lexicographic dual bases
``{e^k}``, ``{e^{i,j} : i < j}`` and ``{e^{u,v,w} : u < v < w}``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .field import FiniteField
from .heisenberg import coincidence_card, make_heisenberg, make_twisted
from .liealg import LieAlgebra


@functools.lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


@functools.lru_cache(maxsize=None)
def triples(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(itertools.combinations(range(n), 3))


@functools.lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {pq: t for t, pq in enumerate(pairs(n))}


def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    P = np.array(pairs(n), dtype=np.int64).reshape(-1, 2)
    return P[:, 0], P[:, 1]


def cochain2(F: FiniteField, n: int, terms: dict[tuple[int, int], object]) -> np.ndarray:
    """2-cochain from ``{(a, b): coeff}`` with 1-based labels in any order."""
    v = np.zeros(len(pairs(n)), dtype=np.int64)
    idx = pair_index(n)
    for (a, b), c in terms.items():
        c = F.code(c)
        if a == b:
            continue
        if a > b:
            a, b, c = b, a, int(F.neg(c))
        t = idx[a - 1, b - 1]
        v[t] = F.add(v[t], c)
    return v


def antisym_matrix(F: FiniteField, n: int, phi) -> np.ndarray:
    """Gram matrix ``M`` with ``phi(x ^ y) = x^T M y``; works on batches of cochains."""
    phi = np.asarray(phi, dtype=np.int64)
    I, J = pair_arrays(n)
    M = np.zeros(phi.shape[:-1] + (n, n), dtype=np.int64)
    M[..., I, J] = phi
    M[..., J, I] = F.neg(phi)
    return M


def wedge2(F: FiniteField, X, Y) -> np.ndarray:
    """Coordinates of ``x ^ y`` in the basis ``e_i ^ e_j`` (i < j), batched over rows."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    I, J = pair_arrays(X.shape[-1])
    return F.sub(F.mul(X[..., I], Y[..., J]), F.mul(X[..., J], Y[..., I]))


def eval2(F: FiniteField, phi, X, Y) -> np.ndarray:
    """``phi(x ^ y)`` row-wise."""
    W = wedge2(F, X, Y)
    return F.sum(F.mul(W, np.asarray(phi, dtype=np.int64)), axis=-1)


def format_cochain(F: FiniteField, n: int, v, degree: int) -> str:
    idx = {1: [(k,) for k in range(n)], 2: pairs(n), 3: triples(n)}[degree]
    parts = []
    for c, lab in zip(np.asarray(v), idx):
        if c:
            s = F.format(c)
            coef = "" if s == "1" else (f"({s})" if "+" in s else s)
            parts.append(coef + "e^{" + ",".join(str(t + 1) for t in lab) + "}")
    return " + ".join(parts) if parts else "0"


def d1_matrix(L: LieAlgebra) -> np.ndarray:
    """``d^1 psi (g ^ h) = psi([g, h])``; shape (C(n,2), n)."""
    I, J = pair_arrays(L.n)
    return L.sc[I, J].copy()


def d2_matrix(L: LieAlgebra) -> np.ndarray:
    """``d^2 phi (g^h^f) = phi([g,h]^f) - phi([g,f]^h) + phi([h,f]^g)``; shape (C(n,3), C(n,2))."""
    F, n = L.field, L.n
    npairs = len(pairs(n))
    if n < 3:
        return np.zeros((0, npairs), dtype=np.int64)
    E = antisym_matrix(F, n, np.eye(npairs, dtype=np.int64))  # (pairs, n, n)
    T = F.einsum("uvk,tkw->uvwt", L.sc, E)  # phi_t([e_u, e_v] ^ e_w)
    U = np.array(triples(n), dtype=np.int64)
    u, v, w = U[:, 0], U[:, 1], U[:, 2]
    return F.add(F.sub(T[u, v, w], T[u, w, v]), T[v, w, u])


@dataclass
class CohomologyResult:
    q: int
    dim: int
    representatives: np.ndarray
    kernel_dim: int
    image_dim: int
    kernel: la.Subspace = None
    image: la.Subspace = None


def _cohomology_from(F: FiniteField, q: int, d_out: np.ndarray | None,
                     d_in: np.ndarray | None, dim_cochains: int) -> CohomologyResult:
    if d_out is None or d_out.shape[0] == 0:
        K = la.Subspace(F, dim_cochains, la.identity(dim_cochains))
    else:
        K = la.kernel_basis(F, d_out)
    if d_in is None or d_in.size == 0:
        Im = la.Subspace(F, dim_cochains, la.zeros(0, dim_cochains))
    else:
        Im = la.image_basis(F, d_in)
    reps = la.quotient_basis(F, K, Im)
    return CohomologyResult(q, K.dim - Im.dim, reps, K.dim, Im.dim, K, Im)


def ce_cohomology(L: LieAlgebra, q: int) -> CohomologyResult:
    """``H^q = ker d^q / im d^{q-1}`` for q in {0, 1, 2}."""
    if q == 0:
        return _cohomology_from(L.field, 0, np.zeros((L.n, 1), np.int64), None, 1)
    if q == 1:
        return _cohomology_from(L.field, 1, d1_matrix(L), None, L.n)
    if q == 2:
        return _cohomology_from(L.field, 2, d2_matrix(L), d1_matrix(L), len(pairs(L.n)))
    raise ValueError("only degrees 0, 1, 2 are supported")


def h2_basis_cocycles(F: FiniteField, m: int, lam) -> np.ndarray:
    """Explicit cocycles whose classes form a basis of H^2 of the twisted algebra.

    For every pair i < j with l_i = +-l_j: ``e^{i,j} - l_i/l_j e^{m+i,m+j}`` and
    ``e^{i,m+j} - l_i/l_j e^{m+i,j}``; then ``e^{i,m+i}`` for i <= m-1.
    Non-coincident pairs contribute nothing (their prefactor vanishes).
    """
    lam = F.codes(lam)
    n = 2 * m + 2
    out = []
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            li, lj = lam[i - 1], lam[j - 1]
            if not (li == lj or li == F.neg(lj)):
                continue
            r = F.neg(F.div(li, lj))
            out.append(cochain2(F, n, {(i, j): 1, (m + i, m + j): r}))
            out.append(cochain2(F, n, {(i, m + j): 1, (m + i, j): r}))
    for i in range(1, m):
        out.append(cochain2(F, n, {(i, m + i): 1}))
    return np.array(out, dtype=np.int64).reshape(-1, len(pairs(n)))


def h2_dimension_formula(F: FiniteField, m: int, lam) -> int:
    return 2 * coincidence_card(F, lam) + m - 1


# -- action of the rank-one quotient ------------------------------------------

def _ideal_derivation(L: LieAlgebra, m: int) -> np.ndarray:
    """Matrix of ad(e_{2m+2}) restricted to the Heisenberg ideal (column j = [x, e_j])."""
    N = 2 * m + 1
    return L.sc[2 * m + 1, :N, :N].T.copy()


def _cochain_action(F: FiniteField, D: np.ndarray, q: int) -> np.ndarray:
    """Coadjoint action ``(x.phi)(g_1..g_q) = -sum phi(.., [x, g_i], ..)`` on C^q."""
    N = D.shape[0]
    if q == 0:
        return np.zeros((1, 1), dtype=np.int64)
    if q == 1:
        return F.neg(D.T)
    if q == 2:
        npairs = len(pairs(N))
        Phi = antisym_matrix(F, N, np.eye(npairs, dtype=np.int64))
        # (x.phi) Gram matrix = -(D^T Phi + Phi D)
        left = F.einsum("ka,tkb->tab", D, Phi)
        right = F.einsum("tak,kb->tab", Phi, D)
        G = F.neg(F.add(left, right))
        I, J = pair_arrays(N)
        return G[:, I, J].T.copy()  # column t = image of basis cochain t
    raise ValueError("only degrees 0, 1, 2 are supported")


@dataclass
class ActionOnCohomology:
    q: int
    matrix: np.ndarray
    representatives: np.ndarray
    well_defined: bool


def quotient_action_full(L: LieAlgebra, m: int, q: int) -> ActionOnCohomology:
    F = L.field
    H = make_heisenberg(F, m)
    coh = ce_cohomology(H, q)
    X = _cochain_action(F, _ideal_derivation(L, m), q)
    well_defined = True
    if coh.image.dim:
        moved = la.matmul(F, X, coh.image.basis.T).T
        well_defined = la.rank(F, np.vstack([coh.image.basis, moved])) == coh.image.dim
    A = np.zeros((coh.dim, coh.dim), dtype=np.int64)
    for c, r in enumerate(coh.representatives):
        y = la.matvec(F, X, r)
        A[:, c] = la.coordinates_modulo(F, coh.representatives, coh.image, y)
    return ActionOnCohomology(q, A, coh.representatives, well_defined)


def quotient_action(L: LieAlgebra, m: int, q: int) -> np.ndarray:
    """Matrix of e_{2m+2} acting on H^q(h_m) in the deterministic representative basis.

    Sign convention: cochains transform by the negative transpose of ad.
    """
    return quotient_action_full(L, m, q).matrix


@dataclass
class HSReport:
    k: int
    total: int
    invariants: int
    coinvariants: int
    dim_hk_ideal: int
    dim_hk1_ideal: int

    @property
    def ok(self) -> bool:
        return self.total == self.invariants + self.coinvariants


def hs_dimension_check(F: FiniteField, m: int, lam, k: int) -> HSReport:
    """Compare dim H^k of the twisted algebra with invariants plus coinvariants."""
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    L = make_twisted(F, m, lam)
    total = ce_cohomology(L, k).dim
    Ak = quotient_action(L, m, k)
    Ak1 = quotient_action(L, m, k - 1)
    inv = Ak.shape[0] - la.rank(F, Ak)
    coinv = Ak1.shape[0] - la.rank(F, Ak1)
    return HSReport(k, total, inv, coinv, Ak.shape[0], Ak1.shape[0])
