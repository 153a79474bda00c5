"""Structure-constant Lie algebras and [p]-operators over finite fields.

Basis labels are 1-based (``e_1 .. e_n``) wherever a caller names a basis
vector; coordinate arrays are ordinary 0-based numpy arrays of field codes.
Most element-level functions accept a single vector ``(n,)`` or a batch
``(N, n)`` and return the same shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from . import linalg as la
from .field import FiniteField, parse_field


class JacobiError(ValueError):
    pass


class RestrictedStructureError(ValueError):
    """Basis [p]-values violating ad(e_i^[p]) = (ad e_i)^p."""


def _as_batch(v) -> tuple[np.ndarray, bool]:
    v = np.asarray(v, dtype=np.int64)
    return (v[None, :], True) if v.ndim == 1 else (v, False)


class LieAlgebra:
    """Finite-dimensional Lie algebra with dense antisymmetric structure constants.

    ``sc[i, j]`` holds the coordinates of ``[e_{i+1}, e_{j+1}]``.  The Jacobi
    identity is checked on every basis triple at construction.
    """

    def __init__(self, field: FiniteField, n: int, sc=None, *, check: bool = True):
        self.field = field
        self.n = n
        sc = np.zeros((n, n, n), dtype=np.int64) if sc is None else np.asarray(sc, dtype=np.int64)
        if sc.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape {(n, n, n)}")
        self.sc = sc
        self.sc.setflags(write=False)
        I, J, K = np.nonzero(np.triu(np.ones((n, n), dtype=bool), 1)[:, :, None] & (sc != 0))
        self.terms = (I.astype(np.int64), J.astype(np.int64), K.astype(np.int64),
                      sc[I, J, K].astype(np.int64))
        if check:
            self._check_antisymmetry()
            self._check_jacobi()

    @classmethod
    def from_brackets(cls, field: FiniteField, n: int,
                      brackets: Mapping[tuple[int, int], object], **kw) -> "LieAlgebra":
        """Build from ``{(i, j): value}`` with 1-based ``i < j``.

        ``value`` is a coordinate vector or a ``{k: coeff}`` mapping.
        """
        sc = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), value in brackets.items():
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise ValueError(f"bracket index ({i}, {j}) out of range")
            vec = np.zeros(n, dtype=np.int64)
            if isinstance(value, Mapping):
                for k, c in value.items():
                    if not 1 <= k <= n:
                        raise ValueError(f"bracket target e_{k} out of range")
                    vec[k - 1] = field.add(vec[k - 1], field.code(c))
            else:
                vec = field.codes(value)
            if i > j:
                i, j, vec = j, i, field.neg(vec)
            sc[i - 1, j - 1] = vec
            sc[j - 1, i - 1] = field.neg(vec)
        return cls(field, n, sc, **kw)

    def _check_antisymmetry(self):
        F = self.field
        if np.any(self.sc[np.arange(self.n), np.arange(self.n)] != 0):
            raise JacobiError("[e_i, e_i] must vanish")
        if np.any(self.sc != F.neg(self.sc.transpose(1, 0, 2))):
            raise JacobiError("structure constants are not antisymmetric")

    def _check_jacobi(self):
        F = self.field
        T = F.einsum("ijl,lkm->ijkm", self.sc, self.sc)
        total = F.add(F.add(T, T.transpose(2, 0, 1, 3)), T.transpose(1, 2, 0, 3))
        bad = np.argwhere(np.any(total != 0, axis=-1))
        if len(bad):
            i, j, k = (int(x) + 1 for x in bad[0])
            raise JacobiError(f"Jacobi identity fails on (e{i}, e{j}, e{k})")

    # -- elements -------------------------------------------------------------

    def element(self, coeffs: Sequence) -> np.ndarray:
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coordinates")
        return self.field.codes(coeffs)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=np.int64)
        v[i - 1] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.n, dtype=np.int64)

    def format(self, v) -> str:
        F = self.field
        parts = []
        for i, c in enumerate(np.asarray(v)):
            if c:
                s = F.format(c)
                coef = "" if s == "1" else (f"({s})" if "+" in s else s)
                parts.append(f"{coef}e{i + 1}")
        return " + ".join(parts) if parts else "0"

    def random_elements(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.field.random(rng, (count, self.n))

    def all_elements(self) -> np.ndarray:
        return self.field.all_vectors(self.n)

    # -- brackets ------------------------------------------------------------

    def bracket(self, g, h) -> np.ndarray:
        G, single = _as_batch(g)
        H, _ = _as_batch(h)
        if G.shape[0] != H.shape[0]:
            G, H = np.broadcast_arrays(G, H)
        out = kernels.bracket_batch(self.field, G, H, self.terms, self.n)
        return out[0] if single else out

    def nfold_bracket(self, gs: Sequence) -> np.ndarray:
        """Left-normed ``[g_1, g_2, ..., g_j] = [[...[g_1, g_2], ...], g_j]``."""
        if len(gs) < 2:
            raise ValueError("need at least two elements")
        acc = gs[0]
        for g in gs[1:]:
            acc = self.bracket(acc, g)
        return acc

    def ad_matrix(self, g) -> np.ndarray:
        """Matrix of ``h -> [g, h]``; column j holds ``[g, e_j]``."""
        return self.field.einsum("i,ijk->kj", np.asarray(g, dtype=np.int64), self.sc)

    def ad_batch(self, G) -> np.ndarray:
        return self.field.einsum("ni,ijk->nkj", np.asarray(G, dtype=np.int64), self.sc)

    def ad_basis(self) -> np.ndarray:
        """Stack of ``ad(e_i)``; shape (n, n, n)."""
        return self.sc.transpose(0, 2, 1).copy()

    def derived_subalgebra(self) -> la.Subspace:
        return la.span(self.field, self.sc.reshape(-1, self.n), self.n)

    def center(self) -> la.Subspace:
        # z central iff sum_i z_i sc[i, j, :] = 0 for all j
        M = self.sc.transpose(1, 2, 0).reshape(-1, self.n)
        return la.kernel_basis(self.field, M)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.n}, field={self.field.spec_string()})"


# -- s_i terms and [p]-operators ----------------------------------------------

def _ad_poly(L: LieAlgebra, g: np.ndarray, h: np.ndarray) -> list[np.ndarray]:
    """Coefficients (t^0 .. t^{p-1}) of ``(ad(t g + h))^{p-1}(g)`` for batches."""
    p = L.field.p
    poly = [g]
    for _ in range(p - 1):
        new = [np.zeros_like(g) for _ in range(len(poly) + 1)]
        for d, c in enumerate(poly):
            if not c.any():
                continue
            new[d + 1] = L.field.add(new[d + 1], L.bracket(g, c))
            new[d] = L.field.add(new[d], L.bracket(h, c))
        poly = new
    return poly


def s_terms(L: LieAlgebra, g, h) -> np.ndarray:
    """``[s_1(g, h), ..., s_{p-1}(g, h)]`` as an array of shape (p-1, ...)."""
    F = L.field
    G, single = _as_batch(g)
    H, _ = _as_batch(h)
    G, H = np.broadcast_arrays(G, H)
    poly = _ad_poly(L, np.ascontiguousarray(G), np.ascontiguousarray(H))
    out = np.stack([F.mul(int(F.inv(i)), poly[i - 1]) for i in range(1, F.p)])
    return out[:, 0] if single else out


def s_sum(L: LieAlgebra, G: np.ndarray, H: np.ndarray) -> np.ndarray:
    F = L.field
    poly = _ad_poly(L, G, H)
    acc = np.zeros_like(G)
    for i in range(1, F.p):
        if poly[i - 1].any():
            acc = F.add(acc, F.mul(int(F.inv(i)), poly[i - 1]))
    return acc


def _peel_order(n: int, peel: str, order) -> list[int]:
    order = list(range(n)) if order is None else [int(i) for i in order]
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of range(n)")
    if peel not in ("left", "right"):
        raise ValueError("peel must be 'left' or 'right'")
    return order


def p_extend_values(L: LieAlgebra, values: np.ndarray, g, *, peel: str = "left",
                    order=None) -> np.ndarray:
    """``g^[p]`` from basis values using semilinearity and the s_i addition law.

    ``peel="left"`` splits ``g = a_j e_j + rest`` (s-terms ``s_i(a_j e_j, rest)``);
    ``peel="right"`` splits ``g = rest + a_j e_j``.  Coordinates are removed in
    ``order`` (default ``0..n-1``; reversed for right peeling).
    """
    F = L.field
    G, single = _as_batch(g)
    order = _peel_order(L.n, peel, order)
    if peel == "right":
        order = order[::-1]
    out = np.zeros_like(G)
    rest = G.copy()
    for j in order:
        a = rest[:, j].copy()
        if not a.any():
            continue
        rest[:, j] = 0
        out = F.add(out, F.mul(F.frob(a)[:, None], values[j][None, :]))
        if rest.any():
            single_term = np.zeros_like(G)
            single_term[:, j] = a
            if peel == "left":
                out = F.add(out, s_sum(L, single_term, rest))
            else:
                out = F.add(out, s_sum(L, rest, single_term))
    return out[0] if single else out


class PMap:
    """A [p]-operator recorded by its values on the ordered basis."""

    def __init__(self, algebra: LieAlgebra, values, *, check: bool = True):
        self.algebra = algebra
        self.values = np.asarray(values, dtype=np.int64).reshape(algebra.n, algebra.n)
        self.values.setflags(write=False)
        if check:
            bad = jacobson_violations(algebra, self.values)
            if bad:
                i = bad[0] + 1
                raise RestrictedStructureError(
                    f"ad(e{i}^[p]) != (ad e{i})^p: the chosen value is not a valid p-image")

    @property
    def field(self) -> FiniteField:
        return self.algebra.field

    def __call__(self, g, **kw) -> np.ndarray:
        return p_extend_values(self.algebra, self.values, g, **kw)

    def __repr__(self) -> str:
        return f"PMap(dim={self.algebra.n}, field={self.field.spec_string()})"


def p_extend(P: PMap, g, **kw) -> np.ndarray:
    return P(g, **kw)


def batched_matpow(F: FiniteField, A: np.ndarray, e: int) -> np.ndarray:
    out = np.broadcast_to(np.eye(A.shape[-1], dtype=np.int64), A.shape).copy()
    base = A
    while e:
        if e & 1:
            out = F.einsum("nab,nbc->nac", out, base)
        base = F.einsum("nab,nbc->nac", base, base)
        e >>= 1
    return out


def jacobson_violations(L: LieAlgebra, values: np.ndarray) -> list[int]:
    """0-based indices i with ad(values[i]) != (ad e_i)^p."""
    target = batched_matpow(L.field, L.ad_basis(), L.field.p)
    got = L.ad_batch(values)
    return [int(i) for i in np.flatnonzero(np.any(got != target, axis=(1, 2)))]


def jacobson_restrictable(L: LieAlgebra) -> tuple[bool, list[np.ndarray | None]]:
    """Solve ``ad(x) = (ad e_i)^p`` for every basis vector.

    Returns ``(restrictable, witnesses)`` where ``witnesses[i]`` is a solution
    ``x`` for ``e_{i+1}`` or ``None`` when that system is inconsistent.
    """
    F = L.field
    n = L.n
    M = L.ad_basis().reshape(n, n * n).T  # column l = vec(ad e_l)
    targets = batched_matpow(F, L.ad_basis(), F.p)
    witnesses = [la.solve(F, M, targets[i].reshape(-1)) for i in range(n)]
    return all(w is not None for w in witnesses), witnesses


@dataclass
class PMapReport:
    ok: bool = True
    failures: list[str] = dc_field(default_factory=list)
    checked: int = 0

    def fail(self, msg: str):
        self.ok = False
        self.failures.append(msg)


def verify_pmap(P: PMap, trials: int = 100, seed: int = 0) -> PMapReport:
    """Check the three restricted axioms on the basis and ``trials`` random elements.

    The first failing axiom is reported with a witness element.
    """
    L, F = P.algebra, P.field
    rng = np.random.default_rng(seed)
    report = PMapReport()
    G = np.vstack([np.eye(L.n, dtype=np.int64), L.random_elements(rng, trials)])
    H = L.random_elements(rng, G.shape[0])
    a = F.random(rng, G.shape[0])
    report.checked = G.shape[0]

    Gp = P(G)
    lhs = P(F.mul(a[:, None], G))
    rhs = F.mul(F.frob(a)[:, None], Gp)
    bad = np.flatnonzero(np.any(lhs != rhs, axis=1))
    if len(bad):
        report.fail(f"axiom (1) (a g)^[p] = a^p g^[p] fails at g = {L.format(G[bad[0]])}")

    right = P(G, peel="right")
    rev = P(G, order=range(L.n - 1, -1, -1))
    bad = np.flatnonzero(np.any((right != Gp) | (rev != Gp), axis=1))
    if len(bad):
        report.fail(f"axiom (2) peeling order changes g^[p] at g = {L.format(G[bad[0]])}")
    sum_lhs = P(F.add(G, H))
    sum_rhs = F.add(F.add(Gp, P(H)), s_sum(L, G, H))
    bad = np.flatnonzero(np.any(sum_lhs != sum_rhs, axis=1))
    if len(bad):
        report.fail(f"axiom (2) additivity fails at g = {L.format(G[bad[0]])}")

    ad_pow = batched_matpow(F, L.ad_batch(G), F.p)
    bad = np.flatnonzero(np.any(L.ad_batch(Gp) != ad_pow, axis=(1, 2)))
    if len(bad):
        report.fail(f"axiom (3) ad(g^[p]) = (ad g)^p fails at g = {L.format(G[bad[0]])}")
    return report


def is_restricted_morphism(psi, P_src: PMap, P_tgt: PMap) -> bool:
    """Whether the matrix ``psi`` (column j = image of e_j) is a restricted morphism."""
    Ls, Lt = P_src.algebra, P_tgt.algebra
    F = Ls.field
    psi = np.asarray(psi, dtype=np.int64)
    if psi.shape != (Lt.n, Ls.n):
        return False
    images = psi.T  # row i = psi(e_i)
    idx_i, idx_j = np.triu_indices(Ls.n, 1)
    lhs = la.matmul(F, Ls.sc[idx_i, idx_j], psi.T) if len(idx_i) else np.zeros((0, Lt.n), np.int64)
    rhs = Lt.bracket(images[idx_i], images[idx_j]) if len(idx_i) else lhs
    if np.any(lhs != rhs):
        return False
    return bool(np.all(la.matmul(F, P_src.values, psi.T) == P_tgt(images)))


# -- JSON --------------------------------------------------------------------

def _sparse(F: FiniteField, v) -> list:
    return [[int(k) + 1, F.format(c)] for k, c in enumerate(v) if c]


def algebra_to_json(L: LieAlgebra, P: PMap | None = None) -> dict:
    """Serialise with 1-based indices and field-element strings."""
    F = L.field
    out = {
        "field": F.spec_string(),
        "dim": L.n,
        "brackets": [[i + 1, j + 1, _sparse(F, L.sc[i, j])]
                     for i in range(L.n) for j in range(i + 1, L.n) if L.sc[i, j].any()],
    }
    if P is not None:
        out["pmap"] = [[i + 1, _sparse(F, P.values[i])] for i in range(L.n)]
    return out


def algebra_from_json(data: Mapping) -> tuple[LieAlgebra, PMap | None]:
    F = parse_field(data["field"])
    n = int(data["dim"])
    brackets = {(int(i), int(j)): {int(k): c for k, c in terms}
                for i, j, terms in data.get("brackets", [])}
    L = LieAlgebra.from_brackets(F, n, brackets)
    P = None
    if "pmap" in data:
        values = np.zeros((n, n), dtype=np.int64)
        for i, terms in data["pmap"]:
            for k, c in terms:
                values[int(i) - 1, int(k) - 1] = F.code(c)
        P = PMap(L, values)
    return L, P
