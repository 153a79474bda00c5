import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twheis import linalg as la
from twheis.cohomology import ce_cohomology, cochain2, d1_matrix, d2_matrix, pairs, triples
from twheis.field import field_make
from twheis.heisenberg import TwistedParams, make_restricted_twisted, restricted_from_params
from twheis.restricted import (classes_independent, compatible_eval, cochain2_star_eval,
                               d1star_matrix, d2star_matrix, delta_eval, delta_map, format_star_class,
                               hochschild_h1_dim, ind1, ind2, ind2_eval, restricted_cohomology,
                               restricted_h2_classes, six_term_check, tilde_closed_form, word_sum,
                               word_sum_defect)

F3, F5 = field_make(3), field_make(5)


def det3(F, rows):
    a, b, c = rows
    t1 = F.mul(a[0], F.sub(F.mul(b[1], c[2]), F.mul(b[2], c[1])))
    t2 = F.mul(a[1], F.sub(F.mul(b[0], c[2]), F.mul(b[2], c[0])))
    t3 = F.mul(a[2], F.sub(F.mul(b[0], c[1]), F.mul(b[1], c[0])))
    return F.add(F.sub(t1, t2), t3)


def eval3(F, n, zeta, g, h, k):
    out = 0
    for coeff, (u, v, w) in zip(zeta, triples(n)):
        if coeff:
            minor = [(x[u], x[v], x[w]) for x in (g, h, k)]
            out = F.add(out, F.mul(coeff, det3(F, minor)))
    return out


def test_compatible_eval_examples():
    L, P = make_restricted_twisted(F3, 1, [1])
    phi = cochain2(F3, 4, {(1, 2): 1})
    for peel in ("left", "right"):
        assert compatible_eval(L, phi, np.zeros(4, dtype=np.int64), [1, 0, 0, 1], peel=peel) == 2
    assert tilde_closed_form(F3, 1, [1], 1, 2, [1, 0, 0, 1]) == 2
    b = np.array([1, 2, 0, 1])
    for i in range(4):
        assert compatible_eval(L, phi, b, L.basis_vector(i + 1)) == b[i]


def test_zero_cocycle_gives_frobenius_map(rng):
    F = field_make(5, 2)
    L, _ = make_restricted_twisted(F, 2, [1, 4])
    b = F.random(rng, 6)
    G = L.random_elements(rng, 50)
    got = compatible_eval(L, np.zeros(len(pairs(6)), dtype=np.int64), b, G)
    assert np.array_equal(got, F.sum(F.mul(F.frob(G), b[None, :]), axis=1))


def test_tilde_closed_form_trivial_cases(rng):
    F = F5
    G = F.random(rng, (20, 6))
    G[:, 5] = 0
    assert not tilde_closed_form(F, 2, [1, 2], 1, 3, G).any()
    top = np.zeros(6, dtype=np.int64)
    top[5] = 3
    assert tilde_closed_form(F, 2, [1, 2], 2, 4, top) == 0
    with pytest.raises(ValueError):
        tilde_closed_form(F, 2, [1, 2], 3, 3, top)


@pytest.mark.parametrize("pk, m, lam", [((3, 1), 1, [1]), ((3, 1), 2, [1, 2]), ((5, 1), 2, [1, 4]),
                                        ((5, 1), 2, [1, 2]), ((7, 1), 2, [3, 5]), ((3, 2), 2, ["x", "2x"])])
def test_tilde_closed_form_equals_right_peel(pk, m, lam, rng):
    F = field_make(*pk)
    L, _ = make_restricted_twisted(F, m, lam)
    G = L.random_elements(rng, 200)
    zero = np.zeros(L.n, dtype=np.int64)
    for s, t in itertools.combinations(range(1, 2 * m + 1), 2):
        phi = cochain2(F, L.n, {(s, t): 1})
        assert np.array_equal(tilde_closed_form(F, m, lam, s, t, G),
                              compatible_eval(L, phi, zero, G, peel="right"))


@pytest.mark.parametrize("pk, m, lam", [((3, 1), 2, [1, 1]), ((5, 1), 2, [1, 4]), ((5, 1), 3, [1, 2, 4]),
                                        ((7, 1), 2, [2, 5]), ((3, 2), 2, ["x", "2x"])])
def test_cocycles_order_independent(pk, m, lam, rng):
    F = field_make(*pk)
    L, P = make_restricted_twisted(F, m, lam, F.random(rng, 2 * m + 2))
    Z = ce_cohomology(L, 2).kernel.basis
    G = L.random_elements(rng, 100)
    for phi in Z[:6]:
        b = F.random(rng, L.n)
        ref = compatible_eval(L, phi, b, G)
        assert np.array_equal(ref, compatible_eval(L, phi, b, G, peel="right"))
        perm = rng.permutation(L.n)
        assert np.array_equal(ref, compatible_eval(L, phi, b, G, order=perm))
        assert np.array_equal(ref, compatible_eval(L, phi, b, G, peel="right", order=perm))


def test_non_cocycle_depends_on_order():
    F = F3
    L, _ = make_restricted_twisted(F, 2, [1, 1])
    phi = cochain2(F, 6, {(1, 2): 1})
    assert la.matvec(F, d2_matrix(L), phi).any()
    G = L.all_elements()[::7]
    left = compatible_eval(L, phi, np.zeros(6, dtype=np.int64), G, peel="left")
    right = compatible_eval(L, phi, np.zeros(6, dtype=np.int64), G, peel="right")
    assert np.any(left != right)


@pytest.mark.parametrize("lam", [[1, 1], [1, 2]])
def test_word_sum_defect_is_minus_d2_in_char3(lam, rng):
    F = F3
    L, _ = make_restricted_twisted(F, 2, lam)
    D2 = d2_matrix(L)
    for _ in range(10):
        phi = F.random(rng, len(pairs(6)))
        zeta = la.matvec(F, D2, phi)
        G, H, K = (L.random_elements(rng, 10) for _ in range(3))
        defect = word_sum_defect(L, phi, G, H, K)
        expect = [F.neg(eval3(F, 6, zeta, g, h, k)) for g, h, k in zip(G, H, K)]
        assert list(defect) == expect


@pytest.mark.parametrize("p", [3, 5, 7])
def test_word_sum_defect_vanishes_for_cocycles(p, rng):
    F = field_make(p)
    L, _ = make_restricted_twisted(F, 2, [1, p - 1])
    Z = ce_cohomology(L, 2).kernel.basis
    phi = la.matvec(F, Z.T, F.random(rng, Z.shape[0]))
    G, H, K = (L.random_elements(rng, 30) for _ in range(3))
    assert not word_sum_defect(L, phi, G, H, K).any()


@pytest.mark.parametrize("p", [3, 5, 7])
def test_word_sum_brute_force(p, rng):
    # enumerate the words explicitly: letters from {g, h}, g_1 = g, g_2 = h
    F = field_make(p)
    L, _ = make_restricted_twisted(F, 1, [2])
    phi = F.random(rng, 6)
    g, h = L.random_elements(rng, 2)
    from twheis.cohomology import eval2
    total = 0
    for tail in itertools.product((0, 1), repeat=p - 2):
        letters = [g, h] + [g if t == 0 else h for t in tail]
        X = letters[0]
        for y in letters[1:-1]:
            X = L.bracket(X, y)
        cnt = 1 + sum(1 for t in tail if t == 0)
        total = F.add(total, F.mul(int(F.inv(cnt)), int(eval2(F, phi, X, letters[-1]))))
    assert word_sum(L, phi, g[None], h[None])[0] == total


def test_tilde_linearity(rng):
    F = F5
    L, _ = make_restricted_twisted(F, 2, [1, 4])
    Z = ce_cohomology(L, 2).kernel.basis
    a = 3
    p1, p2 = Z[0], Z[1]
    zero = np.zeros(6, dtype=np.int64)
    G = L.random_elements(rng, 100)
    lhs = compatible_eval(L, F.add(F.mul(a, p1), p2), zero, G)
    rhs = F.add(F.mul(a, compatible_eval(L, p1, zero, G)), compatible_eval(L, p2, zero, G))
    assert np.array_equal(lhs, rhs)


def test_ind1_examples():
    L, P = make_restricted_twisted(F3, 1, [1])
    assert not ind1([0, 0, 1, 0], P).any()
    assert ind1([0, 0, 0, 1], P)[3] == 1
    _, P1 = make_restricted_twisted(F3, 1, [1], [1, 0, 0, 0])
    assert ind1([0, 0, 1, 0], P1)[0] == 1


def test_ind2_examples(rng):
    L, P = make_restricted_twisted(F3, 1, [1])
    assert not ind2(np.zeros(6, dtype=np.int64), P).any()
    phi = cochain2(F3, 4, {(1, 2): 1})
    assert ind2(phi, P)[0, 3] == 0
    _, Pmu = make_restricted_twisted(F3, 1, [1], [0, 0, 0, 1])
    phi23 = cochain2(F3, 4, {(2, 3): 1})
    assert ind2(phi23, Pmu)[1, 3] == ind2_eval(Pmu, phi23, L.basis_vector(2), L.basis_vector(4))
    assert ind2(phi23, Pmu)[1, 3] != ind2(phi23, P)[1, 3]


def test_ind2_ignores_omega(rng):
    F = F5
    L, P = make_restricted_twisted(F, 2, [1, 2], F.random(rng, 6))
    D = d2star_matrix(L, P)
    x = F.random(rng, 15 + 6)
    y = x.copy()
    y[15:] = F.random(rng, 6)
    assert np.array_equal(la.matvec(F, D, x)[len(triples(6)):], la.matvec(F, D, y)[len(triples(6)):])


def test_d1star_b_part_is_ind1(rng):
    F = F5
    L, P = make_restricted_twisted(F, 2, [1, 4], [1, 2, 3, 4, 0, 2])
    D = d1star_matrix(L, P)
    for _ in range(10):
        psi = F.random(rng, 6)
        assert np.array_equal(la.matvec(F, D, psi)[15:], ind1(psi, P))


def test_restricted_dimensions_examples():
    L, P = make_restricted_twisted(F3, 1, [1])
    assert d1star_matrix(L, P).shape[0] == comb(5, 2) == 10
    assert not la.matmul(F3, d2star_matrix(L, P), d1star_matrix(L, P)).any()
    assert restricted_cohomology(L, P, 1).dim == 0
    h2 = restricted_cohomology(L, P, 2)
    assert h2.dim == 3
    X = restricted_h2_classes(TwistedParams.make(F3, 1, [1]))
    assert [format_star_class(F3, 4, x) for x in X] == [
        "(0, ebar^{1})", "(0, ebar^{2})", "(0, ebar^{3})"]
    assert classes_independent(L, P, X)
    L2, P2 = make_restricted_twisted(F5, 2, [1, 1])
    assert restricted_cohomology(L2, P2, 2).dim == 8


def test_frobenius_classes_are_cocycles():
    L, P = make_restricted_twisted(F5, 2, [1, 2], [1, 1, 1, 1, 1, 1])
    D = d2star_matrix(L, P)
    for i in range(6):
        x = np.zeros(21, dtype=np.int64)
        x[15 + i] = 1
        assert not la.matvec(F5, D, x).any()


def test_hochschild_agrees(rng):
    for pk, m in (((3, 1), 1), ((5, 2), 2)):
        F = field_make(*pk)
        L, P = make_restricted_twisted(F, m, [1] * m, F.random(rng, 2 * m + 2))
        assert hochschild_h1_dim(L, P) == restricted_cohomology(L, P, 1).dim == 0


def test_delta_examples(rng):
    L, P = make_restricted_twisted(F5, 2, [1, 4], [1, 0, 2, 0, 3, 1])
    assert not delta_map(L, P, np.zeros(15, dtype=np.int64)).any()
    Z = ce_cohomology(L, 2).kernel.basis
    G = L.random_elements(rng, 200)
    top = np.tile(L.basis_vector(6), (200, 1))
    for phi in Z:
        assert not delta_eval(P, phi, G, top).any()


@pytest.mark.parametrize("pk, m, lam, expect", [((3, 1), 1, [1], (0, 3)), ((5, 1), 2, [1, 1], (3, 8)),
                                                ((5, 1), 3, [1, 1, 4], (8, 15))])
def test_six_term_examples(pk, m, lam, expect, rng):
    F = field_make(*pk)
    L, P = make_restricted_twisted(F, m, lam, F.random(rng, 2 * m + 2))
    rep = six_term_check(L, P, m=m, trials=20)
    assert rep.ok, rep.failures
    assert (rep.h2, rep.h2_star) == expect
    assert rep.h2_star == (2 * m + 1) + rep.h2 and rep.delta_rank == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_d2star_linear(seed):
    rng = np.random.default_rng(seed)
    F = field_make(3, 2)
    L, P = make_restricted_twisted(F, 1, ["x"], F.random(rng, 4))
    D = d2star_matrix(L, P)
    x, y = F.random(rng, 10), F.random(rng, 10)
    a = int(rng.integers(F.q))
    lhs = la.matvec(F, D, F.add(F.mul(np.int64(a), x), y))
    rhs = F.add(F.mul(np.int64(a), la.matvec(F, D, x)), la.matvec(F, D, y))
    assert np.array_equal(lhs, rhs)


def test_star_eval_reads_coordinates(rng):
    L, P = make_restricted_twisted(F5, 1, [2])
    x = np.concatenate([cochain2(F5, 4, {(1, 4): 1}), [1, 2, 3, 4]])
    g = L.random_elements(rng, 10)
    assert np.array_equal(cochain2_star_eval(L, x, g), compatible_eval(L, x[:6], x[6:], g))


def test_word_bound():
    L, _ = make_restricted_twisted(field_make(17, max_p=17), 1, [1])
    with pytest.raises(ValueError, match="word-sum bound"):
        compatible_eval(L, np.zeros(6, dtype=np.int64), np.zeros(4, dtype=np.int64), L.basis_vector(1))
