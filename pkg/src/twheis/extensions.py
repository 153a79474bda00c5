"""One-dimensional restricted central extensions.

The extension ``G = g + F c`` of a restricted cocycle ``(phi, omega)`` has

    [g, h]_G = [g, h] + phi(g ^ h) c,    g^[p]_G = g^[p] + omega(g) c,

with ``c`` central, ``c^[p] = 0`` and ``c`` stored as the last basis vector.
Cocycles are passed in the C^2_* coordinates of :mod:`twheis.restricted`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import linalg as la
from .cohomology import antisym_matrix, cochain2, pairs
from .heisenberg import TwistedParams, restricted_from_params
from .liealg import JacobiError, LieAlgebra, PMap, is_restricted_morphism, verify_pmap
from .restricted import compatible_eval, d1star_matrix, d2star_matrix


class CocycleError(ValueError):
    """The supplied restricted cochain is not in the kernel of d^2_*."""


@dataclass
class CentralExtension:
    base: LieAlgebra
    base_pmap: PMap
    cocycle: np.ndarray
    algebra: LieAlgebra
    pmap: PMap
    name: str = "generic"
    # c-coefficients of the bracket and p-map from closed formulas, when known
    explicit_bracket: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    explicit_p: Callable[[np.ndarray], np.ndarray] | None = None

    @property
    def phi(self) -> np.ndarray:
        return self.cocycle[:len(pairs(self.base.n))]

    @property
    def omega_basis(self) -> np.ndarray:
        return self.cocycle[len(pairs(self.base.n)):]

    def lift(self, g) -> np.ndarray:
        """Embed base coordinates (c-coefficient 0)."""
        g = np.atleast_2d(np.asarray(g, dtype=np.int64))
        return np.hstack([g, np.zeros((g.shape[0], 1), dtype=np.int64)])


def star_coords(F, n: int, phi_terms: dict | None = None, omega_basis=None) -> np.ndarray:
    """C^2_* coordinates from 1-based ``{(a, b): coeff}`` terms and basis values of omega."""
    c = cochain2(F, n, phi_terms or {})
    b = np.zeros(n, dtype=np.int64) if omega_basis is None else F.codes(omega_basis)
    return np.concatenate([c, b])


def is_restricted_cocycle(L: LieAlgebra, P: PMap, x) -> bool:
    return not la.matvec(L.field, d2star_matrix(L, P), x).any()


def central_extend(L: LieAlgebra, P: PMap, x, *, name: str = "generic") -> CentralExtension:
    """Build the extension of ``(L, P)`` by the restricted cocycle with coordinates ``x``."""
    F, n = L.field, L.n
    x = F.codes(x)
    if x.shape != (len(pairs(n)) + n,):
        raise ValueError(f"expected {len(pairs(n)) + n} coordinates, got {x.shape}")
    if not is_restricted_cocycle(L, P, x):
        raise CocycleError("cochain is not a restricted 2-cocycle (d^2_* x != 0)")
    phi, b = x[:len(pairs(n))], x[len(pairs(n)):]
    sc = np.zeros((n + 1, n + 1, n + 1), dtype=np.int64)
    sc[:n, :n, :n] = L.sc
    sc[:n, :n, n] = antisym_matrix(F, n, phi)
    values = np.zeros((n + 1, n + 1), dtype=np.int64)
    values[:n, :n] = P.values
    values[:n, n] = b
    Lg = LieAlgebra(F, n + 1, sc, check=True)
    return CentralExtension(L, P, x, Lg, PMap(Lg, values), name)


# -- the four families on the twisted Heisenberg algebra ------------------------

def _check_pair(params: TwistedParams, i: int, j: int) -> None:
    F, m = params.field, params.m
    if not (1 <= i < j <= m):
        raise ValueError(f"need 1 <= i < j <= m = {m}, got ({i}, {j})")
    li, lj = params.lam[i - 1], params.lam[j - 1]
    if not (li == lj or li == F.neg(lj)):
        raise ValueError(f"lambda_{i} != +-lambda_{j}: no class for this pair")


def _half_top(params: TwistedParams, G: np.ndarray) -> np.ndarray:
    """``-1/2 a_{2m+2}^{p-2}`` row-wise."""
    F = params.field
    return F.mul(F.neg(int(F.inv(2))), F.pow(G[:, 2 * params.m + 1], F.p - 2))


def _bilinear(F, terms, G, H) -> np.ndarray:
    """``sum coeff (a_u b_v - a_v b_u)`` over 1-based ``(u, v, coeff)`` terms."""
    out = np.zeros(G.shape[0], dtype=np.int64)
    for u, v, c in terms:
        w = F.sub(F.mul(G[:, u - 1], H[:, v - 1]), F.mul(G[:, v - 1], H[:, u - 1]))
        out = F.add(out, F.mul(c, w))
    return out


def _family(params: TwistedParams, x, name, bracket_terms, p_part) -> CentralExtension:
    F = params.field
    L, P = restricted_from_params(params)
    E = central_extend(L, P, x, name=name)
    E.explicit_bracket = lambda G, H: _bilinear(F, bracket_terms, np.atleast_2d(G),
                                                np.atleast_2d(H))
    E.explicit_p = lambda G: p_part(np.atleast_2d(np.asarray(G, dtype=np.int64)))
    return E


def family_hij(params: TwistedParams, i: int, j: int) -> CentralExtension:
    """Class of ``e^{i,j} - l_i/l_j e^{m+i,m+j}`` plus its tilde map (l_i = +-l_j)."""
    _check_pair(params, i, j)
    F, m, lam = params.field, params.m, params.lam
    p, absl = F.p, params.abs_lambda
    r = F.div(lam[i - 1], lam[j - 1])
    x = star_coords(F, 2 * m + 2, {(i, j): 1, (m + i, m + j): F.neg(r)})
    li2, lj2 = F.pow(lam[i - 1], p - 2), F.pow(lam[j - 1], p - 2)
    c3 = F.mul(lam[i - 1], F.pow(lam[j - 1], p - 3))
    c4 = F.div(absl, lam[j - 1])

    def p_part(G):
        a = lambda k: G[:, k - 1]
        s = F.mul(li2, F.mul(a(m + i), a(j)))
        s = F.sub(s, F.mul(lj2, F.mul(a(m + j), a(i))))
        s = F.sub(s, F.mul(c4, F.mul(a(i), a(m + j))))
        s = F.add(s, F.mul(c3, F.mul(a(j), a(m + i))))
        return F.mul(_half_top(params, G), s)

    return _family(params, x, f"H_{{{i},{j}}}",
                   [(i, j, 1), (m + i, m + j, F.neg(r))], p_part)


def family_himj(params: TwistedParams, i: int, j: int) -> CentralExtension:
    """Class of ``e^{i,m+j} - l_i/l_j e^{m+i,j}`` plus its tilde map (l_i = +-l_j)."""
    _check_pair(params, i, j)
    F, m, lam = params.field, params.m, params.lam
    p, absl = F.p, params.abs_lambda
    r = F.div(lam[i - 1], lam[j - 1])
    x = star_coords(F, 2 * m + 2, {(i, m + j): 1, (m + i, j): F.neg(r)})
    li2, lj2 = F.pow(lam[i - 1], p - 2), F.pow(lam[j - 1], p - 2)
    c3 = F.mul(lam[i - 1], F.pow(lam[j - 1], p - 3))
    c4 = F.div(absl, lam[j - 1])

    def p_part(G):
        a = lambda k: G[:, k - 1]
        s = F.mul(li2, F.mul(a(m + i), a(m + j)))
        s = F.sub(s, F.mul(lj2, F.mul(a(j), a(i))))
        s = F.sub(s, F.mul(c4, F.mul(a(i), a(j))))
        s = F.add(s, F.mul(c3, F.mul(a(m + j), a(m + i))))
        return F.mul(_half_top(params, G), s)

    return _family(params, x, f"H_{{{i},{m + j}}}",
                   [(i, m + j, 1), (m + i, j, F.neg(r))], p_part)


def family_himi(params: TwistedParams, i: int) -> CentralExtension:
    """Class of ``e^{i,m+i}`` plus its tilde map (i <= m-1)."""
    F, m, lam = params.field, params.m, params.lam
    if not (1 <= i <= m - 1):
        raise ValueError(f"need 1 <= i <= m-1 = {m - 1}, got {i}")
    x = star_coords(F, 2 * m + 2, {(i, m + i): 1})
    li2 = F.pow(lam[i - 1], F.p - 2)

    def p_part(G):
        sq = F.sub(F.mul(G[:, m + i - 1], G[:, m + i - 1]), F.mul(G[:, i - 1], G[:, i - 1]))
        return F.mul(_half_top(params, G), F.mul(li2, sq))

    return _family(params, x, f"H_{{{i},{m + i}}}", [(i, m + i, 1)], p_part)


def family_hi(params: TwistedParams, i: int) -> CentralExtension:
    """Class of ``(0, ebar^i)``: the bracket is unchanged and ``g^[p]`` gains ``a_i^p c``."""
    F, m = params.field, params.m
    n = 2 * m + 2
    if not (1 <= i <= 2 * m + 1):
        raise ValueError(f"need 1 <= i <= 2m+1 = {2 * m + 1}, got {i}")
    b = np.zeros(n, dtype=np.int64)
    b[i - 1] = 1
    x = star_coords(F, n, None, b)
    return _family(params, x, f"H_{i}", [], lambda G: F.frob(G[:, i - 1]))


FAMILIES = {"hij": family_hij, "himj": family_himj, "himi": family_himi, "hi": family_hi}


def build_family(params: TwistedParams, family: str, i: int, j: int | None = None):
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    if family in ("hij", "himj"):
        if j is None:
            raise ValueError(f"family {family} needs --j")
        return FAMILIES[family](params, i, j)
    return FAMILIES[family](params, i)


def family_instances(params: TwistedParams):
    """Every admissible family member for these parameters, in a fixed order."""
    F, m, lam = params.field, params.m, params.lam
    out = []
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            if lam[i - 1] == lam[j - 1] or lam[i - 1] == F.neg(lam[j - 1]):
                out.append(family_hij(params, i, j))
                out.append(family_himj(params, i, j))
    out += [family_himi(params, i) for i in range(1, m)]
    out += [family_hi(params, i) for i in range(1, 2 * m + 2)]
    return out


# -- verification -----------------------------------------------------------------

@dataclass
class ExtensionReport:
    name: str
    checked: int
    failures: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def projection_matrix(n: int) -> np.ndarray:
    return np.hstack([np.eye(n, dtype=np.int64), np.zeros((n, 1), dtype=np.int64)])


def verify_extension(E: CentralExtension, trials: int = 200, seed: int = 0) -> ExtensionReport:
    """Jacobi, centrality, the restricted axioms, projection, and formula agreement."""
    F, n = E.base.field, E.base.n
    Lg, Pg = E.algebra, E.pmap
    rep = ExtensionReport(E.name, trials)
    rng = np.random.default_rng(seed)
    try:
        LieAlgebra(F, n + 1, Lg.sc, check=True)
    except JacobiError as exc:
        rep.failures.append(f"Jacobi: {exc}")
    if Lg.sc[n].any() or Lg.sc[:, n].any():
        rep.failures.append("c is not central")
    if Pg.values[n].any():
        rep.failures.append("c^[p] != 0")
    pm = verify_pmap(Pg, trials=min(trials, 100), seed=seed)
    if not pm.ok:
        rep.failures += [f"restricted axioms: {f}" for f in pm.failures]
    if not is_restricted_morphism(projection_matrix(n), Pg, E.base_pmap):
        rep.failures.append("projection to the base is not a restricted morphism")
    generic = central_extend(E.base, E.base_pmap, E.cocycle)
    if not (np.array_equal(generic.algebra.sc, Lg.sc)
            and np.array_equal(generic.pmap.values, Pg.values)):
        rep.failures.append("differs from central_extend of the defining cocycle")

    G = E.base.random_elements(rng, trials)
    H = E.base.random_elements(rng, trials)
    full = Pg(E.lift(G))
    expected_c = compatible_eval(E.base, E.phi, E.omega_basis, G)
    if not (np.array_equal(full[:, :n], E.base_pmap(G)) and np.array_equal(full[:, n], expected_c)):
        rep.failures.append("whole-algebra p-map differs from g^[p] + omega(g) c")
    if E.explicit_p is not None and not np.array_equal(E.explicit_p(G), full[:, n]):
        rep.failures.append("closed-form p-map coefficient differs from the generic extension")
    if E.explicit_bracket is not None:
        br = Lg.bracket(E.lift(G), E.lift(H))
        if not np.array_equal(E.explicit_bracket(G, H), br[:, n]):
            rep.failures.append("closed-form bracket coefficient differs from the generic extension")
    return rep


def cohomologous_isomorphism(L: LieAlgebra, P: PMap, x, psi) -> tuple[CentralExtension,
                                                                      CentralExtension,
                                                                      np.ndarray, bool]:
    """Extensions of ``x`` and ``x + d^1_* psi`` with the map ``g -> g + psi(g) c``.

    Returns ``(E1, E2, theta, ok)``; ``ok`` means theta is an invertible restricted
    morphism from E1 to E2.
    """
    F, n = L.field, L.n
    psi = F.codes(psi)
    x2 = F.add(F.codes(x), la.matvec(F, d1star_matrix(L, P), psi))
    E1, E2 = central_extend(L, P, x), central_extend(L, P, x2)
    theta = np.eye(n + 1, dtype=np.int64)
    theta[n, :n] = psi
    ok = la.is_invertible(F, theta) and is_restricted_morphism(theta, E1.pmap, E2.pmap)
    return E1, E2, theta, ok
