import json
import os
import random

import pytest
from hypothesis import given, strategies as st

from ainfkit.bar import apply_homotopy, homotopy_functor
from ainfkit.core import AInfPair, MorphismHomotopy
from ainfkit.deformation import family_matrix
from ainfkit.fixtures import kill_target_fixture, monomial_category, random_dg, random_homotopy
from ainfkit.foundation import FieldSpec
from ainfkit.io import (ParseError, dumps, jet_from_json, jet_to_json, loads, map_from_json, map_to_json,
                        read_json, structure_from_json, structure_to_json, write_json)
from ainfkit.jets import JetAutomorphism, JetPoly

seeds = st.integers(0, 10_000)


def roundtrip(doc):
    return loads(dumps(doc))


@given(seeds, st.sampled_from([FieldSpec(0), FieldSpec(7)]))
def test_structure_roundtrip(seed, field):
    S = random_dg(random.Random(seed), field=field)
    T = structure_from_json(roundtrip(structure_to_json(S)))
    assert T == S and T.field == field


def test_pair_roundtrip():
    P = kill_target_fixture(2)
    Q = structure_from_json(roundtrip(structure_to_json(P)))
    assert isinstance(Q, AInfPair) and Q == P


@given(seeds)
def test_homotopy_and_functor_roundtrip(seed):
    rng = random.Random(seed)
    S = monomial_category(rng, max_arity=4)
    H = random_homotopy(S, rng)
    H2 = map_from_json(roundtrip(map_to_json(H)))
    assert H2.table == H.table
    F = homotopy_functor(S, H, apply_homotopy(S, H))
    F2 = map_from_json(roundtrip(map_to_json(F)))
    assert F2.table == F.table and F2.target == F.target and F2.object_map == F.object_map


def test_morphism_homotopy_roundtrip():
    S = monomial_category(random.Random(3), max_arity=3)
    g = next(g for (g,) in S.composable_words(1) if S.gens_between(S.src[g], S.tgt[g], S.deg[g] - 1))
    table = {(g,): {S.gens_between(S.src[g], S.tgt[g], S.deg[g] - 1)[0]: 2}}
    h = MorphismHomotopy(S, S, table)
    d = map_to_json(h)
    assert d["shift"] == "-n"
    assert map_from_json(roundtrip(d)).table == h.table


def test_shift_mismatch_rejected():
    S = monomial_category(random.Random(1), max_arity=3)
    d = map_to_json(random_homotopy(S, random.Random(1)))
    d["shift"] = "-n"
    with pytest.raises(ParseError):
        map_from_json(d)


def test_jet_roundtrip():
    n, K = 3, 3
    p = JetPoly(n, K, {(1, 0, 0): 2, (0, 1, 1): -1})
    assert jet_from_json(roundtrip(jet_to_json(p, FieldSpec(0)))) == p
    Mt, _ = family_matrix(kill_target_fixture(1), 3)
    assert jet_from_json(roundtrip(jet_to_json(Mt, FieldSpec(0)))) == Mt
    phi = JetAutomorphism([JetPoly.var(n, K, i) + p * p for i in range(n)])
    assert jet_from_json(roundtrip(jet_to_json(phi, FieldSpec(0)))) == phi


def test_parse_error_location():
    with pytest.raises(ParseError) as err:
        loads('{"schema": "ainf/v1",\n  "field": "Q",,\n}')
    assert err.value.line == 2 and err.value.col is not None


def test_schema_checked():
    with pytest.raises(ParseError):
        structure_from_json({"schema": "jet/v1"})


def test_bad_scalar_has_path():
    d = structure_to_json(random_dg(random.Random(0)))
    d["products"][0]["output"] = {k: "one" for k in d["products"][0]["output"]}
    with pytest.raises(ParseError) as err:
        structure_from_json(d)
    assert "$.products" in str(err.value)


def test_atomic_write(tmp_path):
    path = tmp_path / "s.json"
    write_json(path, {"a": 1})
    assert read_json(path) == {"a": 1}
    assert os.listdir(tmp_path) == ["s.json"]

    class Boom:
        pass

    with pytest.raises(TypeError):
        write_json(path, {"a": Boom()})
    assert read_json(path) == {"a": 1}
    assert os.listdir(tmp_path) == ["s.json"]


def test_deterministic_output():
    a = dumps(structure_to_json(kill_target_fixture(5)))
    b = dumps(structure_to_json(kill_target_fixture(5)))
    assert a == b
    json.loads(a)
