"""Restricted cochains with trivial coefficients in degrees at most three.

Coordinates
-----------
* ``C^1_*``: the dual basis ``e^k`` (dimension n).
* ``C^2_*``: ``(c, b)`` where ``c`` holds the ``e^{i,j}`` coefficients of
  phi and ``b_i = omega(e_i)``.  The pair stands for
  ``(phi, sum c_ij tilde(e^{i,j}) + sum b_i ebar^i)``; since every
  tilde map vanishes on basis vectors, ``b`` is read off directly.
* ``C^3_*``: ``(zeta, eta)`` with ``zeta`` in the ``e^{u,v,w}`` basis and
  ``eta`` the n-by-n grid of values on basis pairs, flattened row-major.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from .cohomology import (CohomologyResult, _cohomology_from, ce_cohomology, d1_matrix,
                         d2_matrix, eval2, format_cochain, h2_basis_cocycles, pairs,
                         triples, wedge2)
from .field import FiniteField
from .heisenberg import TwistedParams
from .liealg import LieAlgebra, PMap, _as_batch, _peel_order

MAX_WORD_P = 13


def _iterated_bracket(L: LieAlgebra, X: np.ndarray, H: np.ndarray, times: int) -> np.ndarray:
    """Left-normed ``[x, h, ..., h]`` with ``times`` copies of h, row-wise."""
    for _ in range(times):
        X = L.bracket(X, H)
    return X


# -- compatible maps ------------------------------------------------------------

def word_sum(L: LieAlgebra, phi, G: np.ndarray, H: np.ndarray) -> np.ndarray:
    """``sum_w phi([g_1, ..., g_{p-1}] ^ g_p) / #(g)`` over words with g_1 = g, g_2 = h.

    Words are grouped by how many letters equal g, so only O(p^2) batched
    brackets are formed instead of one per word.
    """
    F = L.field
    p = F.p
    phi = np.asarray(phi, dtype=np.int64)
    if p == 2:
        return eval2(F, phi, G, H)
    # S[c] = sum of [g_1..g_l] over prefixes of the current length l with c letters g
    S = {1: L.bracket(G, H)}
    for _ in range(p - 3):
        nxt: dict[int, np.ndarray] = {}
        for c, X in S.items():
            for cc, Y in ((c + 1, L.bracket(X, G)), (c, L.bracket(X, H))):
                nxt[cc] = F.add(nxt[cc], Y) if cc in nxt else Y
        S = nxt
    total = np.zeros(G.shape[0], dtype=np.int64)
    for c, X in S.items():
        tg = F.mul(int(F.inv(c + 1)), eval2(F, phi, X, G))
        th = F.mul(int(F.inv(c)), eval2(F, phi, X, H))
        total = F.add(total, F.add(tg, th))
    return total


def word_sum_defect(L: LieAlgebra, phi, g, h, k) -> np.ndarray:
    """Failure of associativity of the addition law at ``(g, h, k)``.

    ``W(g+h, k) + W(g, h) - W(g, h+k) - W(h, k)``; vanishes for cocycles.  In
    characteristic 3 it equals ``-d^2 phi(g ^ h ^ k)``.
    """
    F = L.field
    G, single = _as_batch(g)
    H, _ = _as_batch(h)
    K, _ = _as_batch(k)
    out = F.sub(F.add(word_sum(L, phi, F.add(G, H), K), word_sum(L, phi, G, H)),
                F.add(word_sum(L, phi, G, F.add(H, K)), word_sum(L, phi, H, K)))
    return out[0] if single else out


def compatible_eval(L: LieAlgebra, phi, omega_basis_values, g, *, peel: str = "left",
                    order=None) -> np.ndarray:
    """Value at ``g`` of the unique phi-compatible map with the given basis values.

    Coordinates are peeled off one at a time: ``omega(a e_j + r) =
    a^p omega(e_j) + omega(r) + word_sum(a e_j, r)`` for ``peel="left"``, or
    with the roles of the two summands exchanged for ``peel="right"``.

    The result is independent of ``peel`` and ``order`` when phi is a
    2-cocycle.  Otherwise the addition law is not associative (see
    :func:`word_sum_defect`) and the value depends on the splitting; right
    peeling in the default order splits ``g`` as (everything before the last
    coordinate) + (last coordinate), which is the splitting behind the closed
    form in :func:`tilde_closed_form`.
    """
    F = L.field
    if F.p > MAX_WORD_P:
        raise ValueError(f"characteristic {F.p} exceeds the word-sum bound {MAX_WORD_P}")
    G, single = _as_batch(g)
    vals = F.codes(omega_basis_values)
    order = _peel_order(L.n, peel, order)
    if peel == "right":
        order = order[::-1]
    out = np.zeros(G.shape[0], dtype=np.int64)
    rest = G.copy()
    for j in order:
        a = rest[:, j].copy()
        if not a.any():
            continue
        rest[:, j] = 0
        out = F.add(out, F.mul(F.frob(a), vals[j]))
        if rest.any():
            one = np.zeros_like(G)
            one[:, j] = a
            ws = word_sum(L, phi, one, rest) if peel == "left" else word_sum(L, phi, rest, one)
            out = F.add(out, ws)
    return out[0] if single else out


def frobenius_eval(F: FiniteField, b, g) -> np.ndarray:
    """``sum_i b_i a_i^p`` for ``g = sum a_i e_i``."""
    G, single = _as_batch(g)
    out = F.sum(F.mul(F.frob(G), F.codes(b)[None, :]), axis=1)
    return out[0] if single else out


def cochain2_star_eval(L: LieAlgebra, x, g, **kw) -> np.ndarray:
    """Omega-part of the C^2_* coordinate vector ``x = (c, b)`` evaluated at ``g``."""
    n = L.n
    x = np.asarray(x, dtype=np.int64)
    c, b = x[:len(pairs(n))], x[len(pairs(n)):]
    return compatible_eval(L, c, b, g, **kw)


def tilde_closed_form(F: FiniteField, m: int, lam, s: int, t: int, g) -> np.ndarray:
    """Closed-form ``tilde(e^{s,t})(g)`` on the twisted Heisenberg algebra (1 <= s < t <= 2m).

    ``-1/2 a_{2m+2}^{p-2} sum_{i<=m, j<=2m} lam_i^{p-2} a_j (a_i e^{s,t}(e_{m+i}, e_j)
    + a_{m+i} e^{s,t}(e_i, e_j))``.
    """
    if not (1 <= s < t <= 2 * m):
        raise ValueError(f"need 1 <= s < t <= 2m = {2 * m}, got ({s}, {t})")
    if F.p == 2:
        raise ValueError("closed form needs odd characteristic")
    lam = F.codes(lam)
    G, single = _as_batch(g)
    p = F.p
    M = np.zeros((2 * m, 2 * m), dtype=np.int64)
    M[s - 1, t - 1] = 1
    M[t - 1, s - 1] = F.neg(1)
    A = G[:, :2 * m]
    Mx = F.einsum("xy,ny->nx", M, A)  # Mx[:, x] = sum_j a_j e^{s,t}(e_x, e_j)
    lp = F.pow(lam, p - 2)[None, :]
    s1 = F.sum(F.mul(F.mul(lp, A[:, :m]), Mx[:, m:]), axis=1)
    s2 = F.sum(F.mul(F.mul(lp, A[:, m:]), Mx[:, :m]), axis=1)
    pref = F.mul(F.neg(int(F.inv(2))), F.pow(G[:, 2 * m + 1], p - 2))
    out = F.mul(pref, F.add(s1, s2))
    return out[0] if single else out


# -- induced maps and differentials -------------------------------------------

def ind1(psi, P: PMap) -> np.ndarray:
    """Basis values ``psi(e_i^[p])``."""
    F = P.field
    return la.matvec(F, P.values, F.codes(psi))


def _ind2_tensor(L: LieAlgebra, P: PMap) -> np.ndarray:
    """Matrix (n*n, C(n,2)): row (i, j) gives ``phi -> ind^2(phi)(e_i, e_j)``."""
    F, n = L.field, L.n
    I, J = np.divmod(np.arange(n * n), n)
    E = np.eye(n, dtype=np.int64)
    Ei, Ej = E[I], E[J]
    W1 = wedge2(F, Ei, P.values[J])
    R = _iterated_bracket(L, Ei, Ej, F.p - 1)
    W2 = wedge2(F, R, Ej)
    return F.sub(W1, W2)


def ind2(phi, P: PMap) -> np.ndarray:
    """Grid ``ind^2(phi)(e_i, e_j) = phi(e_i ^ e_j^[p]) - phi([e_i, e_j, ..., e_j] ^ e_j)``."""
    L, F = P.algebra, P.field
    return la.matvec(F, _ind2_tensor(L, P), F.codes(phi)).reshape(L.n, L.n)


def ind2_eval(P: PMap, phi, g, h) -> np.ndarray:
    """``ind^2(phi)(g, h)`` straight from the definition, row-wise."""
    L, F = P.algebra, P.field
    G, single = _as_batch(g)
    H, _ = _as_batch(h)
    R = _iterated_bracket(L, G, H, F.p - 1)
    out = F.sub(eval2(F, phi, G, P(H)), eval2(F, phi, R, H))
    return out[0] if single else out


def d1star_matrix(L: LieAlgebra, P: PMap) -> np.ndarray:
    """``psi -> (d^1 psi, ind^1 psi)``; shape (C(n,2)+n, n)."""
    return np.vstack([d1_matrix(L), P.values])


def d2star_matrix(L: LieAlgebra, P: PMap) -> np.ndarray:
    """``(phi, omega) -> (d^2 phi, ind^2 phi)``; shape (C(n,3)+n^2, C(n,2)+n).

    The b-columns vanish: ind^2 does not see omega.
    """
    n = L.n
    top = np.hstack([d2_matrix(L), np.zeros((len(triples(n)), n), dtype=np.int64)])
    bottom = np.hstack([_ind2_tensor(L, P), np.zeros((n * n, n), dtype=np.int64)])
    return np.vstack([top, bottom])


# -- cohomology -----------------------------------------------------------------

@dataclass
class RestrictedCohomologyResult(CohomologyResult):
    hochschild_dim: int | None = None


def hochschild_h1_dim(L: LieAlgebra, P: PMap) -> int:
    """``dim (g / ([g, g] + span of p-th powers))^*``."""
    F = L.field
    D = L.derived_subalgebra().basis
    return L.n - la.rank(F, np.vstack([D, P.values]))


def restricted_cohomology(L: LieAlgebra, P: PMap, q: int) -> RestrictedCohomologyResult:
    F, n = L.field, L.n
    if q == 1:
        res = _cohomology_from(F, 1, d1star_matrix(L, P), None, n)
        h = hochschild_h1_dim(L, P)
        if h != res.dim:
            raise ArithmeticError(f"H^1_* mismatch: rank {res.dim} vs Hochschild {h}")
        return RestrictedCohomologyResult(**vars(res), hochschild_dim=h)
    if q == 2:
        res = _cohomology_from(F, 2, d2star_matrix(L, P), d1star_matrix(L, P),
                               len(pairs(n)) + n)
        return RestrictedCohomologyResult(**vars(res))
    raise ValueError("only degrees 1 and 2 are supported")


def restricted_h2_classes(params: TwistedParams) -> np.ndarray:
    """C^2_* coordinates of the standard class list for the twisted algebra.

    Each ordinary basis cocycle is paired with its tilde map (b = 0), followed
    by ``(0, ebar^i)`` for i <= 2m+1.
    """
    F, m = params.field, params.m
    n = 2 * m + 2
    Z = h2_basis_cocycles(F, m, params.lam)
    top = np.hstack([Z, np.zeros((Z.shape[0], n), dtype=np.int64)])
    frob = np.zeros((2 * m + 1, len(pairs(n)) + n), dtype=np.int64)
    frob[np.arange(2 * m + 1), len(pairs(n)) + np.arange(2 * m + 1)] = 1
    return np.vstack([top, frob])


def classes_independent(L: LieAlgebra, P: PMap, X: np.ndarray) -> bool:
    """True when the rows of X are d^2_*-cocycles independent modulo im d^1_*."""
    F = L.field
    if la.matmul(F, d2star_matrix(L, P), X.T).any():
        return False
    B = la.image_basis(F, d1star_matrix(L, P))
    return la.rank(F, np.vstack([B.basis, X])) == B.dim + X.shape[0]


def format_star_class(F: FiniteField, n: int, x) -> str:
    x = np.asarray(x)
    c, b = x[:len(pairs(n))], x[len(pairs(n)):]
    phi = format_cochain(F, n, c, 2)
    parts = [f"tilde({phi})"] if c.any() else []
    for i, v in enumerate(b):
        if v:
            s = F.format(v)
            coef = "" if s == "1" else (f"({s})" if "+" in s else s)
            parts.append(f"{coef}ebar^{{{i + 1}}}")
    return f"({phi}, {' + '.join(parts) if parts else '0'})"


# -- Delta and the six-term sequence -----------------------------------------

def delta_eval(P: PMap, phi, g, h) -> np.ndarray:
    """``Delta_phi(g).h = phi(g ^ [h, g, ..., g]) - phi(g^[p] ^ h)``, row-wise."""
    L, F = P.algebra, P.field
    G, single = _as_batch(g)
    H, _ = _as_batch(h)
    R = _iterated_bracket(L, H, G, F.p - 1)
    out = F.sub(eval2(F, phi, G, R), eval2(F, phi, P(G), H))
    return out[0] if single else out


def delta_map(L: LieAlgebra, P: PMap, phi) -> np.ndarray:
    """Grid ``D[i, j] = Delta_phi(e_i).e_j``."""
    n = L.n
    I, J = np.divmod(np.arange(n * n), n)
    E = np.eye(n, dtype=np.int64)
    return delta_eval(P, phi, E[I], E[J]).reshape(n, n)


@dataclass
class SixTermReport:
    h1: int
    h1_star: int
    h2: int
    h2_star: int
    hom_fr: int
    delta_rank: int
    frobenius_independent: bool | None
    swap_trials: int
    failures: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def six_term_check(L: LieAlgebra, P: PMap, *, m: int | None = None, trials: int = 100,
                   seed: int = 0) -> SixTermReport:
    """Dimension bookkeeping along the six-term sequence plus the swap property.

    With ``m`` given (twisted Heisenberg algebra) the classes ``(0, ebar^i)``,
    i <= 2m+1, are also tested for independence in H^2_*.
    """
    F, n = L.field, L.n
    rng = np.random.default_rng(seed)
    H1, H2 = ce_cohomology(L, 1), ce_cohomology(L, 2)
    S1, S2 = restricted_cohomology(L, P, 1), restricted_cohomology(L, P, 2)
    failures: list[str] = []

    # Delta as a linear map from H^2 to Frobenius maps into H^1 (basis grid)
    grids = [delta_map(L, P, r).ravel() for r in H2.representatives]
    drank = la.rank(F, np.array(grids).reshape(len(grids), n * n)) if grids else 0
    for r, grid in zip(H2.representatives, grids):
        cols = grid.reshape(n, n)
        if not all(H1.kernel.contains(row) for row in cols if row.any()):
            failures.append("Delta_phi(e_i) is not a 1-cocycle")
            break

    predicted = (n - H1.dim + S1.dim) + (H2.dim - drank)
    if S2.dim != predicted:
        failures.append(f"dim H^2_* = {S2.dim} but six-term sequence predicts {predicted}")

    frob_ok = None
    if m is not None:
        X = np.zeros((2 * m + 1, len(pairs(n)) + n), dtype=np.int64)
        X[np.arange(2 * m + 1), len(pairs(n)) + np.arange(2 * m + 1)] = 1
        frob_ok = classes_independent(L, P, X)
        if not frob_ok:
            failures.append("classes (0, ebar^i), i <= 2m+1, are dependent in H^2_*")

    D1 = d1_matrix(L)
    for t in range(trials):
        psi = F.random(rng, n)
        phi = la.matvec(F, D1, psi)
        b = ind1(psi, P)
        G = L.random_elements(rng, 4)
        Hh = L.random_elements(rng, 4)
        # (d^1 psi, ind^1 psi) is a restricted cochain
        lhs = compatible_eval(L, phi, b, G)
        rhs = F.sum(F.mul(P(G), psi[None, :]), axis=1)
        if not np.array_equal(lhs, rhs):
            failures.append(f"trial {t}: ind^1(psi) is not d^1(psi)-compatible")
            break
        # ind^2 evaluated directly against the grid of (d^2_* d^1_* psi)
        direct = ind2_eval(P, phi, G, Hh)
        grid = ind2(phi, P)
        via_grid = F.sum(F.mul(F.einsum("ni,ij->nj", G, grid), F.frob(Hh)), axis=1)
        if not np.array_equal(direct, via_grid) or direct.any():
            failures.append(f"trial {t}: ind^2(d^1 psi) disagrees between evaluations")
            break

    return SixTermReport(H1.dim, S1.dim, H2.dim, S2.dim, n, drank, frob_ok, trials, failures)
