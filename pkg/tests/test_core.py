import random

import pytest
from hypothesis import given, strategies as st

from ainfkit.bar import apply_homotopy
from ainfkit.core import (AInfFunctor, AInfPair, AInfStructure, ArityExceeded, Gen, HomotopyData,
                          ObjectMapMismatch, StructureError, check_ainf, opposite, representable_pair)
from ainfkit.fixtures import corrupt, monomial_category, random_dg, random_homotopy
from ainfkit.foundation import GradedSpace

seeds = st.integers(0, 10_000)


def dual_numbers():
    """k[x]/(x^3) with x in degree 1: an associative graded algebra."""
    O = "O"
    x, x2 = Gen(O, O, 1, "x"), Gen(O, O, 2, "x2")
    return AInfStructure([O], {(O, O): GradedSpace({1: ("x",), 2: ("x2",)})},
                         {(x, x): {x2: 1}}, max_arity=4)


def test_associative_algebra_is_clean():
    assert check_ainf(dual_numbers()) == []


def test_arity_bound_enforced():
    with pytest.raises(ArityExceeded):
        check_ainf(dual_numbers(), 5)


def test_bad_output_degree_rejected():
    O = "O"
    x = Gen(O, O, 1, "x")
    with pytest.raises(StructureError):
        AInfStructure([O], {(O, O): GradedSpace({1: ("x",)})}, {(x, x): {x: 1}})


def free_algebra(length=3):
    """Words in x, y (degree 1) up to ``length``, concatenation product."""
    from itertools import product
    O = "O"
    words = [w for L in range(1, length + 1) for w in product("xy", repeat=L)]
    g = {w: Gen(O, O, len(w), "".join(w)) for w in words}
    hom = {(O, O): GradedSpace({L: tuple("".join(w) for w in words if len(w) == L)
                                for L in range(1, length + 1)})}
    prods = {(g[u], g[v]): {g[u + v]: 1} for u in words for v in words if len(u + v) <= length}
    return AInfStructure([O], hom, prods, max_arity=4), g


def test_altered_m3_is_caught_at_arity_4():
    S, g = free_algebra()
    assert check_ainf(S) == []
    x, xy = g[("x",)], g[("x", "y")]
    bad = S.with_table({**S.table, (S.index[x],) * 3: {S.index[xy]: 1}})
    res = check_ainf(bad)
    assert res and {r.arity for r in res} == {4}


def test_altered_m2_of_dg_caught_at_arity_3():
    D = random_dg(random.Random(5))
    bad, (n, w, g) = corrupt(D, random.Random(1), arity=2)
    res = check_ainf(bad)
    assert res and min(r.arity for r in res) <= 3


@given(seeds)
def test_homotopy_image_is_valid(seed):
    rng = random.Random(seed)
    S = monomial_category(rng)
    assert check_ainf(S) == []
    assert check_ainf(apply_homotopy(S, random_homotopy(S, rng))) == []


def test_opposite_keeps_m1():
    D = random_dg(random.Random(2))
    Dop = opposite(D)
    for w, vec in D.table.items():
        if len(w) == 1:
            g = D.gens[w[0]]
            key = (Dop.index[Gen(g.tgt, g.src, g.deg, g.label)],)
            want = {Dop.index[Gen(D.tgt[o], D.src[o], D.deg[o], D.gens[o].label)]: c for o, c in vec.items()}
            assert Dop.table[key] == want


def test_opposite_m2_on_odd_elements():
    O = "O"
    a, b, ab, ba = (Gen(O, O, 1, "a"), Gen(O, O, 1, "b"), Gen(O, O, 2, "ab"), Gen(O, O, 2, "ba"))
    S = AInfStructure([O], {(O, O): GradedSpace({1: ("a", "b"), 2: ("ab", "ba")})},
                      {(a, b): {ab: 1}, (b, a): {ba: 2}}, max_arity=3)
    Sop = opposite(S)
    assert Sop.product(a, b) == {ba: -2}
    assert Sop.product(b, a) == {ab: -1}


@given(seeds)
def test_opposite_involution(seed):
    rng = random.Random(seed)
    S = monomial_category(rng)
    S = apply_homotopy(S, random_homotopy(S, rng))
    assert opposite(opposite(S)) == S
    assert check_ainf(opposite(S)) == []


def test_representable_pair_of_dg_is_dg_module():
    D = random_dg(random.Random(7))
    O, X = D.objects[0], D.objects[-1]
    P = representable_pair(D, O, X)
    assert isinstance(P, AInfPair)
    assert max(len(w) for w in P.table) <= 2
    assert check_ainf(P) == []


@given(seeds)
def test_representable_pair_inherits_validity(seed):
    rng = random.Random(seed)
    S = monomial_category(rng)
    S = apply_homotopy(S, random_homotopy(S, rng))
    for O in S.objects:
        for X in S.objects:
            assert check_ainf(representable_pair(S, O, X)) == []


def test_representable_pair_on_itself():
    S = dual_numbers()
    P = representable_pair(S, "O", "O")
    assert [g.label for g in P.gens if g.src == "Y"] == [g.label for g in P.gens if g.src == "X"]


def test_functor_object_map_checked():
    S = dual_numbers()
    with pytest.raises(ObjectMapMismatch):
        AInfFunctor(S, S, {}, {"O": "P"})


def test_homotopy_starts_at_arity_two():
    S = dual_numbers()
    with pytest.raises(StructureError):
        HomotopyData(S, {(0,): {0: 1}})
