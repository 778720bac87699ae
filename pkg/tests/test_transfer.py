import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ainfkit.bar import check_functor
from ainfkit.core import AInfStructure, Gen, check_ainf
from ainfkit.dual import dual_algebra
from ainfkit.fixtures import monomial_category, random_dg
from ainfkit.foundation import GradedSpace, vec_add
from ainfkit.transfer import NotDg, certify, contraction_from_dg, local_algebra_fixture, transfer

seeds = st.integers(0, 10_000)


def _apply(mp, vec):
    out = {}
    for g, c in vec.items():
        vec_add(out, mp.get(g, {}), c)
    return out


def _m2(D, u, v):
    out = {}
    for a, x in u.items():
        for b, y in v.items():
            vec_add(out, D.table.get((a, b), {}), x * y)
    return out


@pytest.fixture(scope="module")
def cubic():
    D = local_algebra_fixture(3, 6)
    return D, transfer(D, N=6)


def test_minimal_input_is_fixed():
    S = monomial_category(random.Random(2), max_arity=4)
    M = transfer(S, N=4)
    c = M.contraction
    assert all(not v for v in c.h.values())
    assert M.structure.table == {w: v for w, v in S.table.items()}
    assert certify(M) == {n: {"ainf": 0, "functor": 0} for n in range(1, 5)}


def test_acyclic_two_term_complex():
    O = "O"
    a, b = Gen(O, O, 1, "a"), Gen(O, O, 2, "b")
    D = AInfStructure([O], {(O, O): GradedSpace({1: ("a",), 2: ("b",)})}, {(a,): {b: 3}}, max_arity=2)
    c = contraction_from_dg(D)
    assert len(c.H.gens) == 0
    # ip - 1 = m1 h + h m1 on a gives -a = h(3b)
    assert c.h[D.index[b]] == {D.index[a]: Fraction(-1, 3)}
    assert c.verify() == []


@given(seeds)
def test_contraction_identities(seed):
    D = random_dg(random.Random(seed))
    assert contraction_from_dg(D).verify() == []


@given(seeds)
def test_transfer_certified(seed):
    D = random_dg(random.Random(seed), max_arity=4)
    M = transfer(D, N=4)
    assert all(v == {"ainf": 0, "functor": 0} for v in certify(M).values())


@given(seeds)
def test_transferred_m2(seed):
    D = random_dg(random.Random(seed), max_arity=3)
    M = transfer(D, N=3)
    c, H = M.contraction, M.structure
    for y1 in range(len(H.gens)):
        for y2 in range(len(H.gens)):
            if H.src[y1] == H.tgt[y2]:
                want = _apply(c.p, _m2(D, c.i[y1], c.i[y2]))
                assert H.table.get((y1, y2), {}) == want


def test_not_dg_rejected(cubic):
    with pytest.raises(NotDg):
        transfer(cubic[1].structure)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_local_fixture_cohomology(n):
    D = local_algebra_fixture(n, 6, width=4)
    assert check_ainf(D) == []
    H = transfer(D, N=4).structure
    dims = [len(H.gens_between("O", "O", d)) for d in range(1, 4)]
    assert dims == [1, 1, 1]


def test_dual_numbers_model():
    H = transfer(local_algebra_fixture(2, 6, width=4), N=6).structure
    y = H.gens_between("O", "O", 1)[0]
    y2 = H.gens_between("O", "O", 2)[0]
    y3 = H.gens_between("O", "O", 3)[0]
    assert set(H.table[(y, y)]) == {y2}
    assert set(H.table[(y, y2)]) == {y3} and set(H.table[(y2, y)]) == {y3}
    assert not [w for w in H.table if len(w) > 2 and all(H.deg[i] == 1 for i in w)]


def test_cubic_model_products(cubic):
    D, M = cubic
    H, c = M.structure, M.contraction
    y = H.gens_between("O", "O", 1)[0]
    z = H.gens_between("O", "O", 2)[0]
    assert (y, y) not in H.table
    m3 = H.table[(y, y, y)]
    assert set(m3) == {z} and m3[z] != 0
    # the two binary trees, written out by hand
    iy = c.i[y]
    hm = _apply(c.h, _m2(D, iy, iy))
    t1 = _apply(c.p, _m2(D, hm, iy))
    t2 = _apply(c.p, _m2(D, iy, hm))
    want = dict(t1)
    vec_add(want, t2, -1)
    assert m3 == want


def test_cubic_certified(cubic):
    assert all(v == {"ainf": 0, "functor": 0} for v in certify(cubic[1]).values())
    assert check_functor(cubic[1].functor()) == []


@pytest.mark.parametrize("n", [2, 3, 4])
def test_power_structure(n):
    H = transfer(local_algebra_fixture(n, 6), N=6).structure
    y = H.gens_between("O", "O", 1)[0]
    z = H.gens_between("O", "O", 2)[0]
    for k in range(2, n):
        assert (y,) * k not in H.table
    assert set(H.table[(y,) * n]) == {z}


def test_contraction_choice_does_not_change_hilbert():
    D = local_algebra_fixture(3, 5)
    c1 = contraction_from_dg(D)
    # a second contraction: rescale the cohomology representatives
    H = c1.H
    i2 = {y: {g: 2 * x for g, x in v.items()} for y, v in c1.i.items()}
    p2 = {g: {y: x / 2 for y, x in v.items()} for g, v in c1.p.items()}
    c2 = type(c1)(c1.D, H, i2, p2, c1.h)
    assert c2.verify() == []
    h1 = dual_algebra(transfer(D, c1, 5).structure, 5).hilbert()
    h2 = dual_algebra(transfer(D, c2, 5).structure, 5).hilbert()
    assert h1 == h2 == [1, 1, 1, 0, 0, 0]
