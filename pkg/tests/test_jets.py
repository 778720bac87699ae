import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ainfkit.jets import (DependentLinearParts, JetAutomorphism, JetIdeal, JetMatrix, JetPoly, RingMismatch,
                          SizeTooLarge, coordinate_matrix, det, ideal_jet_equal, linear_independence,
                          minors, monomials, straighten)

N, K = 3, 3
seeds = st.integers(0, 10_000)


def rand_poly(rng, n=N, k=K, min_deg=0, terms=4):
    mons = list(monomials(n, k, min_deg))
    return JetPoly(n, k, {rng.choice(mons): Fraction(rng.randint(-3, 3)) for _ in range(terms)})


def rand_auto(rng, n=N, k=K):
    while True:
        imgs = [JetPoly.var(n, k, i) * rng.choice([1, 2, -1]) + rand_poly(rng, n, k, 2, 2) for i in range(n)]
        imgs[0] = imgs[0] + JetPoly.var(n, k, n - 1)
        try:
            phi = JetAutomorphism(imgs)
            phi.inverse()
            return phi
        except ZeroDivisionError:
            continue


def t(i, n=N, k=K):
    return JetPoly.var(n, k, i)


def test_truncation_on_multiply():
    x = t(0)
    assert (x * x * x * x) == JetPoly(N, K)
    assert (x * x * x).max_degree() == 3


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        JetPoly.var(2, 3, 0) + JetPoly.var(3, 3, 0)


def test_monomial_count():
    assert len(list(monomials(3, 2))) == 10
    assert len(list(monomials(2, 3, 2))) == 7


@given(seeds)
def test_ring_axioms(seed):
    rng = random.Random(seed)
    a, b, c = rand_poly(rng), rand_poly(rng), rand_poly(rng)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == JetPoly(N, K)


def _rand_matrix(rng, s):
    return [[rand_poly(rng, terms=3) for _ in range(s)] for _ in range(s)]


def _matmul(A, B):
    s = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(s)), JetPoly(N, K)) for j in range(s)] for i in range(s)]


@given(seeds, st.integers(1, 3))
def test_det_multiplicative(seed, s):
    rng = random.Random(seed)
    A, B = _rand_matrix(rng, s), _rand_matrix(rng, s)
    assert det(_matmul(A, B)) == det(A) * det(B)


def test_det_2x2():
    a, b, c, d = t(0), t(1), t(2), t(0) + t(1)
    assert det([[a, b], [c, d]]) == a * d - b * c


def test_minors_sizes():
    M = coordinate_matrix((2, 3), [0, 1, 2, 3, 4, 5], 6, 2)
    assert len(minors(M, 1).generators) == 6
    assert len(minors(M, 2).generators) == 3
    with pytest.raises(SizeTooLarge):
        minors(M, 3)
    with pytest.raises(SizeTooLarge):
        minors(M, 0)


def test_ideal_dims():
    I = JetIdeal(2, 3, [JetPoly.var(2, 3, 0)])
    assert I.dims() == [0, 1, 2, 3]
    assert I.contains(JetPoly.var(2, 3, 0) * JetPoly.var(2, 3, 1))
    assert not I.contains(JetPoly.var(2, 3, 1))


def test_ideal_equal_generators_differ():
    x, y = t(0), t(1)
    I = JetIdeal(N, K, [x, y])
    J = JetIdeal(N, K, [x + y, x - y])
    assert ideal_jet_equal(I, J)
    assert not ideal_jet_equal(I, JetIdeal(N, K, [x]))


def test_ideal_unit_fills_ring():
    one = JetPoly.const(N, K, 1)
    I = JetIdeal(N, K, [one + t(0)])
    assert all(I.contains(JetPoly(N, K, {m: 1})) for m in monomials(N, K))


@given(seeds)
def test_automorphism_inverse(seed):
    phi = rand_auto(random.Random(seed))
    psi = phi.inverse()
    ident = JetAutomorphism.identity(N, K)
    assert phi.compose(psi) == ident
    assert psi.compose(phi) == ident


@given(seeds)
def test_automorphism_composition_acts(seed):
    rng = random.Random(seed)
    phi, psi = rand_auto(rng), rand_auto(rng)
    p = rand_poly(rng)
    assert phi.compose(psi)(p) == phi(psi(p))
    q = rand_poly(rng)
    assert phi(p * q) == phi(p) * phi(q)


@given(seeds)
def test_ideal_equality_preserved_by_automorphism(seed):
    rng = random.Random(seed)
    phi = rand_auto(rng)
    gens = [rand_poly(rng, min_deg=1) for _ in range(2)]
    I = JetIdeal(N, K, gens)
    J = JetIdeal(N, K, [phi(g) for g in gens])
    back = JetIdeal(N, K, [phi.inverse()(g) for g in J.generators])
    assert ideal_jet_equal(I, back)
    assert I.dims() == J.dims()


def test_linear_independence():
    assert linear_independence(JetMatrix([[t(0) + t(1) * t(1), t(1) - t(2), t(2)]]))
    assert not linear_independence(JetMatrix([[t(0), t(1)], [t(2), t(0) * t(1)]]))
    assert not linear_independence(JetMatrix([[t(0), t(1)], [t(0) + t(1), t(2)]]))


def test_straighten_dependent():
    with pytest.raises(DependentLinearParts):
        straighten(JetMatrix([[t(0), t(0) * 2]]))
    with pytest.raises(DependentLinearParts):
        straighten(JetMatrix([[t(0), t(1)], [t(2), t(0) + t(1)]]))


@given(seeds)
def test_straighten_gives_coordinates(seed):
    rng = random.Random(seed)
    n = 4
    phi = rand_auto(rng, n, 3)
    M = JetMatrix([[phi(JetPoly.var(n, 3, 0)), phi(JetPoly.var(n, 3, 1))],
                   [phi(JetPoly.var(n, 3, 2)), phi(JetPoly.var(n, 3, 3))]])
    assert linear_independence(M)
    chi, S, piv = straighten(M)
    assert S == coordinate_matrix((2, 2), piv, n, 3)
    assert ideal_jet_equal(JetIdeal(n, 3, [chi(g) for g in minors(M, 2).generators]), minors(S, 2))
