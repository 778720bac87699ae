import random

from hypothesis import given, settings, strategies as st

from ainfkit.bar import (_transport_by_inverse, apply_homotopy, bar_differential, bar_h0, check_bar_square,
                         check_functor, check_morphism_homotopy, compose_functors, compose_homotopies,
                         deconcatenation_closed, homotopic_functor, homotopy_functor, inverse_homotopy,
                         perturb, to_bar, transported_products)
from ainfkit.core import AInfFunctor, HomotopyData, MorphismHomotopy, check_ainf, opposite
from ainfkit.fixtures import corrupt, monomial_category, random_dg, random_homotopy
from ainfkit.transfer import local_algebra_fixture, transfer

seeds = st.integers(0, 10_000)


def arities(res):
    return {r.arity for r in res}


def bar_lengths(sq):
    return {n for n, v in sq.items() if v}


def test_b2_sign():
    S = monomial_category(random.Random(11))
    b = to_bar(S.table, S.deg)
    for (i, j), vec in S.table.items():
        for g, c in vec.items():
            assert b[(i, j)][g] == (-1) ** S.deg[i] * c


def test_b1_vanishes_for_minimal_and_no_empty_word():
    S = monomial_category(random.Random(4))
    b = bar_differential(S)
    assert not b.component(1)
    assert () not in b.table


def test_dg_square_zero():
    D = random_dg(random.Random(8))
    assert not bar_lengths(check_bar_square(bar_differential(D)))


def test_arity3_failure_located_at_length_3():
    S = monomial_category(random.Random(6), max_arity=3)
    bad, _ = corrupt(S, random.Random(2), arity=2)
    res = check_ainf(bad)
    assert arities(res) == {3}
    assert bar_lengths(check_bar_square(bar_differential(bad))) == {3}


@given(seeds)
def test_bar_square_matches_constraint(seed):
    rng = random.Random(seed)
    D = random_dg(rng, max_arity=4)
    S = perturb(D, random_homotopy(D, rng))
    if rng.random() < 0.5:
        S, _ = corrupt(S, rng)
    assert arities(check_ainf(S)) == bar_lengths(check_bar_square(bar_differential(S)))


@given(seeds)
def test_perturbed_structure_square_zero(seed):
    rng = random.Random(seed)
    D = random_dg(rng, max_arity=4)
    S = perturb(D, random_homotopy(D, rng))
    assert not bar_lengths(check_bar_square(bar_differential(S)))


def test_zero_homotopy_is_identity():
    S = monomial_category(random.Random(9))
    assert apply_homotopy(S, HomotopyData(S, {})) == S


@settings(max_examples=100)
@given(seeds)
def test_homotopy_then_inverse(seed):
    rng = random.Random(seed)
    S = monomial_category(rng, max_arity=4)
    H = random_homotopy(S, rng)
    S2 = apply_homotopy(S, H)
    assert {w: v for w, v in S2.table.items() if len(w) == 2} == {w: v for w, v in S.table.items() if len(w) == 2}
    back = apply_homotopy(S2, inverse_homotopy(H))
    assert back == S


@given(seeds)
def test_transport_agrees_with_conjugation(seed):
    rng = random.Random(seed)
    S = monomial_category(rng, max_arity=4)
    H = random_homotopy(S, rng)
    fast = apply_homotopy(S, H)
    slow = _transport_by_inverse(S, H, 4)
    assert fast.table == {w: v for w, v in slow.items() if len(w) >= 2}
    words = sorted(fast.table)[:10]
    assert transported_products(S, H, words) == {w: fast.table[w] for w in words}


@given(seeds)
def test_homotopy_is_functor(seed):
    rng = random.Random(seed)
    S = monomial_category(rng, max_arity=4)
    H = random_homotopy(S, rng)
    assert check_functor(homotopy_functor(S, H)) == []


def test_identity_functor_clean():
    S = monomial_category(random.Random(1))
    assert check_functor(AInfFunctor.identity(S)) == []


def test_identity_into_opposite_fails():
    O = "O"
    from ainfkit.core import AInfStructure, Gen
    from ainfkit.foundation import GradedSpace
    a, b, ab = Gen(O, O, 1, "a"), Gen(O, O, 1, "b"), Gen(O, O, 2, "ab")
    S = AInfStructure([O], {(O, O): GradedSpace({1: ("a", "b"), 2: ("ab", "ba")})},
                      {(a, b): {ab: 1}}, max_arity=3)
    assert check_functor(AInfFunctor.identity(S, opposite(S))) != []


@given(seeds)
def test_composition(seed):
    rng = random.Random(seed)
    S = monomial_category(rng, max_arity=4)
    H1 = random_homotopy(S, rng)
    S1 = apply_homotopy(S, H1)
    H2 = random_homotopy(S1, rng)
    F, G = homotopy_functor(S, H1, S1), homotopy_functor(S1, H2)
    GF = compose_functors(G, F)
    assert check_functor(GF) == []
    assert compose_functors(AInfFunctor.identity(S1), F).table == F.table
    assert compose_functors(F, AInfFunctor.identity(S)).table == F.table
    H = compose_homotopies(H2, H1)
    assert all(len(w) >= 2 for w in H.table)
    assert GF.components(1) == {(i,): {i: S.field.one} for i in range(len(S.gens))}
    assert apply_homotopy(S, H) == G.target


def random_morphism_homotopy(f, rng, entries=3):
    S, T = f.source, f.target
    table = {}
    for n in (1, 2):
        for w in rng.sample(S.composable_words(n), min(entries, len(S.composable_words(n)))):
            d = sum(S.deg[i] for i in w) - n
            outs = T.gens_between(f.object_map[S.src[w[-1]]], f.object_map[S.tgt[w[0]]], d)
            if outs:
                table[w] = {T.index[T.gens[rng.choice(outs)]]: rng.choice([-2, -1, 1, 2])}
    return MorphismHomotopy(S, T, table)


def test_morphism_homotopy_zero():
    S = monomial_category(random.Random(3), max_arity=3)
    H = random_homotopy(S, random.Random(3))
    f = homotopy_functor(S, H)
    zero = MorphismHomotopy(S, f.target, {})
    assert check_morphism_homotopy(zero, f, f)
    g = AInfFunctor(S, f.target, {**f.table, **{w: {k: 2 * c for k, c in v.items()}
                                                 for w, v in f.table.items() if len(w) == 2}})
    if g.table != f.table:
        assert not check_morphism_homotopy(zero, f, g)


@given(seeds)
def test_homotopic_functor_satisfies_identity(seed):
    rng = random.Random(seed)
    S = monomial_category(rng, max_arity=3)
    f = homotopy_functor(S, random_homotopy(S, rng))
    h = random_morphism_homotopy(f, rng)
    g = homotopic_functor(f, h)
    assert check_morphism_homotopy(h, f, g)
    assert check_functor(g) == []


def test_h0_bar_of_local_models():
    for n in (2, 3, 4):
        M = transfer(local_algebra_fixture(n), N=5).structure
        dims = {L: len(v) for L, v in bar_h0(M, 5).items()}
        assert [dims[L] for L in range(1, 6)] == [1 if L < n else 0 for L in range(1, 6)]
        assert deconcatenation_closed(M, 5)
