"""Heisenberg and twisted Heisenberg algebras, their [p]-structures and isomorphism tests.

Basis of the twisted algebra: ``e_1..e_m, e_{m+1}..e_{2m}, e_{2m+1}`` (central)
and ``e_{2m+2}`` acting by ``[e_{2m+2}, e_i] = l_i e_{m+i}``,
``[e_{2m+2}, e_{m+i}] = l_i e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg as la
from .field import FiniteField
from .liealg import LieAlgebra, PMap, is_restricted_morphism


class NotRestrictableError(ValueError):
    pass


def make_heisenberg(field: FiniteField, m: int) -> LieAlgebra:
    if m < 1:
        raise ValueError("m must be >= 1")
    brackets = {(i, m + i): {2 * m + 1: 1} for i in range(1, m + 1)}
    return LieAlgebra.from_brackets(field, 2 * m + 1, brackets)


def _lam_codes(field: FiniteField, m: int, lam) -> np.ndarray:
    lam = field.codes(lam)
    if len(lam) != m:
        raise ValueError(f"expected {m} twisting parameters, got {len(lam)}")
    if np.any(lam == 0):
        raise ValueError("twisting parameters must be nonzero")
    return lam


def make_twisted(field: FiniteField, m: int, lam) -> LieAlgebra:
    if m < 1:
        raise ValueError("m must be >= 1")
    lam = _lam_codes(field, m, lam)
    top = 2 * m + 2
    brackets = {}
    for i in range(1, m + 1):
        brackets[i, m + i] = {2 * m + 1: 1}
        brackets[top, i] = {m + i: lam[i - 1]}
        brackets[top, m + i] = {i: lam[i - 1]}
    return LieAlgebra.from_brackets(field, top, brackets)


def restrictable_predicate(field: FiniteField, lam) -> bool:
    """p > 2 and all l_i^(p-1) equal."""
    if field.p == 2:
        return False
    powers = field.pow(field.codes(lam), field.p - 1)
    return bool(np.all(powers == powers[0]))


@dataclass(frozen=True)
class TwistedParams:
    field: FiniteField
    m: int
    lam: np.ndarray
    mu: np.ndarray = dc_field(default=None)

    @classmethod
    def make(cls, field: FiniteField, m: int, lam, mu=None) -> "TwistedParams":
        lam = _lam_codes(field, m, lam)
        if mu is None:
            mu = np.zeros(2 * m + 2, dtype=np.int64)
        mu = field.codes(mu)
        if len(mu) != 2 * m + 2:
            raise ValueError(f"mu must have {2 * m + 2} entries")
        return cls(field, m, lam, mu)

    @property
    def n(self) -> int:
        return 2 * self.m + 2

    @property
    def abs_lambda(self) -> int:
        """Common value l_i^(p-1)."""
        if not restrictable_predicate(self.field, self.lam):
            raise NotRestrictableError("not restrictable (p>2 and equal λ^{p-1} required)")
        return int(self.field.pow(self.lam[0], self.field.p - 1))

    def with_mu(self, mu) -> "TwistedParams":
        return TwistedParams.make(self.field, self.m, self.lam, mu)


def make_restricted_twisted(field: FiniteField, m: int, lam, mu=None) -> tuple[LieAlgebra, PMap]:
    params = TwistedParams.make(field, m, lam, mu)
    return restricted_from_params(params)


def restricted_from_params(params: TwistedParams) -> tuple[LieAlgebra, PMap]:
    F, m = params.field, params.m
    if not restrictable_predicate(F, params.lam):
        raise NotRestrictableError("not restrictable (p>2 and equal λ^{p-1} required)")
    L = make_twisted(F, m, params.lam)
    values = np.zeros((L.n, L.n), dtype=np.int64)
    values[:, 2 * m] = params.mu
    values[2 * m + 1, 2 * m + 1] = params.abs_lambda
    return L, PMap(L, values)


def _central_coeff(params: TwistedParams, G: np.ndarray) -> np.ndarray:
    """e_{2m+1}-coefficient of the closed-form p-th power."""
    F, m = params.field, params.m
    p = F.p
    a_top = G[:, 2 * m + 1]
    mu_part = F.sum(F.mul(F.frob(G), params.mu[None, :]), axis=1)
    lam_pow = F.pow(params.lam, p - 2)
    sq = F.sub(F.mul(G[:, :m], G[:, :m]), F.mul(G[:, m:2 * m], G[:, m:2 * m]))
    quad = F.sum(F.mul(lam_pow[None, :], sq), axis=1)
    half = int(F.inv(2))
    return F.add(mu_part, F.mul(F.mul(half, F.pow(a_top, p - 2)), quad))


def closed_form_p(params: TwistedParams, g) -> np.ndarray:
    """Explicit p-th power map of the restricted twisted Heisenberg algebra."""
    F, m = params.field, params.m
    G = np.atleast_2d(np.asarray(g, dtype=np.int64))
    a_top = G[:, 2 * m + 1]
    absl = params.abs_lambda
    out = np.zeros_like(G)
    scale = F.mul(F.pow(a_top, F.p - 1), absl)
    out[:, :2 * m] = F.mul(scale[:, None], G[:, :2 * m])
    out[:, 2 * m + 1] = F.mul(F.frob(a_top), absl)
    out[:, 2 * m] = _central_coeff(params, G)
    return out[0] if np.ndim(g) == 1 else out


def coincidence_card(field: FiniteField, lam) -> int:
    """Number of pairs i < j with l_i = l_j or l_i = -l_j."""
    lam = [int(x) for x in field.codes(lam)]
    count = 0
    for i in range(len(lam)):
        for j in range(i + 1, len(lam)):
            if lam[i] == lam[j] or lam[i] == int(field.neg(lam[j])):
                count += 1
    return count


# -- isomorphism conditions ----------------------------------------------------

@dataclass(frozen=True)
class IsoCandidate:
    """``A`` acts on (e_1..e_{2m}, e_{2m+2}); ``k = (k_1, ..., k_{2m+1}, k_{2m+2})``."""

    A: np.ndarray
    k: np.ndarray

    @classmethod
    def make(cls, field: FiniteField, A, k) -> "IsoCandidate":
        A = np.stack([field.codes(row) for row in A])
        k = field.codes(k)
        if A.shape != (len(k) - 1, len(k) - 1):
            raise ValueError("A must be (2m+1)x(2m+1) and k of length 2m+2")
        return cls(A, k)


def candidate_map(cand: IsoCandidate, m: int) -> np.ndarray:
    """Matrix of Psi (column j = Psi(e_j)) on the full basis."""
    n = 2 * m + 2
    labels = list(range(2 * m)) + [2 * m + 1]  # reduced index -> 0-based full index
    psi = np.zeros((n, n), dtype=np.int64)
    for r, j in enumerate(labels):
        for l, t in enumerate(labels):
            psi[t, j] = cand.A[r, l]
        psi[2 * m, j] = cand.k[j]
    psi[2 * m, 2 * m] = cand.k[2 * m]
    return psi


@dataclass
class IsoReport:
    conditions: dict[int, bool]
    witnesses: dict[int, str]
    morphism: bool
    tuples_checked: int
    exhaustive: bool

    @property
    def ok(self) -> bool:
        return all(self.conditions.values()) and self.morphism

    @property
    def consistent(self) -> bool:
        """Conditions and the morphism cross-check give the same verdict."""
        return all(self.conditions.values()) == self.morphism


def _unit(N: int, a: int, b: int) -> np.ndarray:
    E = np.zeros((N, N), dtype=np.int64)
    E[a - 1, b - 1] = 1
    return E


def iso_conditions_check(params: TwistedParams, params2: TwistedParams, cand: IsoCandidate, *,
                         seed: int = 0, exhaustive_limit: int = 10**5,
                         samples: int = 1000) -> IsoReport:
    """Check the six isomorphism conditions between two [p]-structures on one algebra.

    Conditions (1)-(4) are matrix identities.  (5)-(6) quantify over all
    coordinate tuples: exhaustive below ``exhaustive_limit`` tuples, otherwise
    ``samples`` seeded random ones.  The map built from ``cand`` is also
    checked directly with :func:`is_restricted_morphism`.
    """
    F, m = params.field, params.m
    if params2.m != m or np.any(params2.lam != params.lam) or params2.field != F:
        raise ValueError("both structures must live on the same twisted algebra")
    N = 2 * m + 1
    A, k = cand.A, cand.k
    lam = params.lam
    p = F.p
    At = A.T
    mm = lambda X, Y: la.matmul(F, X, Y)
    sc = lambda c, X: F.mul(int(c), X)
    add = F.add
    Q = [F.sub(_unit(N, N, m + i), _unit(N, m + i, N)) for i in range(1, m + 1)]
    Pm = [F.sub(_unit(N, N, i), _unit(N, i, N)) for i in range(1, m + 1)]
    Jm = np.zeros((N, N), dtype=np.int64)
    for i in range(m):
        Jm[i, m + i] = 1
        Jm[m + i, i] = F.neg(1)

    cond: dict[int, bool] = {}
    wit: dict[int, str] = {}

    rhs = sc(k[2 * m], Jm)
    for i in range(m):
        rhs = add(rhs, sc(F.mul(k[i], lam[i]), Q[i]))
        rhs = add(rhs, sc(F.mul(k[m + i], lam[i]), Pm[i]))
    cond[1] = bool(np.all(mm(mm(A, Jm), At) == rhs))
    if not cond[1]:
        wit[1] = "A J A^t differs from the required form"

    def combo(col: int) -> np.ndarray:
        out = np.zeros((N, N), dtype=np.int64)
        for j in range(m):
            out = add(out, sc(F.mul(lam[j], A[j, col]), Q[j]))
            out = add(out, sc(F.mul(lam[j], A[m + j, col]), Pm[j]))
        return out

    for num, mats, offset in ((2, Q, 0), (3, Pm, m)):
        cond[num] = True
        for i in range(m):
            lhs = sc(lam[i], mm(mm(A, mats[i]), At))
            if np.any(lhs != combo(offset + i)):
                cond[num] = False
                wit[num] = f"fails for i = {i + 1}"
                break
    cond[4] = not np.any(combo(2 * m))
    if not cond[4]:
        wit[4] = "translation column of A does not commute with the bracket"

    n = 2 * m + 2
    total = F.q**n
    exhaustive = total <= exhaustive_limit
    if exhaustive:
        G = F.all_vectors(n)
    else:
        G = F.random(np.random.default_rng(seed), (samples, n))
    red = np.concatenate([G[:, :2 * m], G[:, 2 * m + 1:]], axis=1)
    frak = mm(red, A)  # (N_tuples, 2m+1)
    a_top = G[:, 2 * m + 1]
    f_top = frak[:, 2 * m]
    lhs5 = F.mul(F.pow(a_top, p - 1)[:, None], frak)
    rhs5 = F.mul(F.pow(f_top, p - 1)[:, None], frak)
    bad = np.flatnonzero(np.any(lhs5 != rhs5, axis=1))
    cond[5] = len(bad) == 0
    if bad.size:
        wit[5] = f"a = {[F.format(x) for x in G[bad[0]]]}"

    absl = params.abs_lambda
    lin = F.sum(F.mul(G[:, :2 * m], k[None, :2 * m]), axis=1)
    lhs6 = F.mul(F.mul(F.pow(a_top, p - 1), absl), lin)
    lhs6 = add(lhs6, F.mul(F.mul(F.frob(a_top), absl), k[2 * m + 1]))
    lhs6 = add(lhs6, F.mul(k[2 * m], _central_coeff(params, G)))
    image = np.zeros_like(G)
    image[:, :2 * m] = frak[:, :2 * m]
    image[:, 2 * m + 1] = f_top
    image[:, 2 * m] = F.sum(F.mul(G, k[None, :]), axis=1)
    rhs6 = _central_coeff(params2, image)
    bad = np.flatnonzero(lhs6 != rhs6)
    cond[6] = len(bad) == 0
    if bad.size:
        wit[6] = f"a = {[F.format(x) for x in G[bad[0]]]}"

    psi = candidate_map(cand, m)
    invertible = la.is_invertible(F, A) and k[2 * m] != 0
    _, P1 = restricted_from_params(params)
    _, P2 = restricted_from_params(params2)
    morphism = bool(invertible and is_restricted_morphism(psi, P1, P2))
    return IsoReport(cond, wit, morphism, len(G), exhaustive)


def scaling_automorphism(params: TwistedParams, alpha) -> tuple[IsoCandidate, TwistedParams]:
    """Candidate ``e_i -> a e_i (i <= 2m)``, ``e_{2m+1} -> a^2 e_{2m+1}`` with the
    transported [p]-structure, for tests and demos."""
    F, m = params.field, params.m
    a = F.code(alpha)
    N = 2 * m + 1
    A = np.zeros((N, N), dtype=np.int64)
    A[np.arange(2 * m), np.arange(2 * m)] = a
    A[2 * m, 2 * m] = 1
    k = np.zeros(2 * m + 2, dtype=np.int64)
    k[2 * m] = F.mul(a, a)
    p = F.p
    mu = params.mu
    mu2 = mu.copy()
    mu2[:2 * m] = F.mul(F.pow(a, 2 - p), mu[:2 * m])
    mu2[2 * m] = F.mul(F.pow(a, 2 - 2 * p), mu[2 * m])
    mu2[2 * m + 1] = F.mul(F.mul(a, a), mu[2 * m + 1])
    return IsoCandidate(A, k), params.with_mu(mu2)


def swap_automorphism(params: TwistedParams) -> tuple[IsoCandidate, TwistedParams]:
    """Candidate ``e_i <-> e_{m+i}``, ``e_{2m+1} -> -e_{2m+1}`` with transported mu."""
    F, m = params.field, params.m
    N = 2 * m + 1
    A = np.zeros((N, N), dtype=np.int64)
    for i in range(m):
        A[i, m + i] = 1
        A[m + i, i] = 1
    A[2 * m, 2 * m] = 1
    k = np.zeros(2 * m + 2, dtype=np.int64)
    k[2 * m] = F.neg(1)
    mu = params.mu
    mu2 = mu.copy()
    mu2[:m] = F.neg(mu[m:2 * m])
    mu2[m:2 * m] = F.neg(mu[:m])
    mu2[2 * m + 1] = F.neg(mu[2 * m + 1])
    return IsoCandidate(A, k), params.with_mu(mu2)
