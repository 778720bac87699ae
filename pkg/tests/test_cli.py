import json

import pytest

from ainfkit.cli import INPUT, OK, PROPERTY, main
from ainfkit.fixtures import product_free_pair
from ainfkit.io import structure_to_json, write_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fixture(capsys, tmp_path, kind, *extra):
    path = tmp_path / f"{kind}.json"
    assert run(capsys, "fixture", kind, "--out", str(path), *extra)[0] == OK
    return str(path)


@pytest.mark.parametrize("kind", ["randomdg", "perturb", "killtarget", "productfree"])
def test_fixture_then_check(capsys, tmp_path, kind):
    path = fixture(capsys, tmp_path, kind, "--seed", "3")
    code, out, _ = run(capsys, "check", path)
    assert code == OK and json.loads(out)["clean"] is True
    code, out, _ = run(capsys, "bar", path)
    assert code == OK and json.loads(out)["square_zero"] is True


@pytest.mark.parametrize("n", [2, 3])
def test_local_algebra_dual(capsys, tmp_path, n):
    path = fixture(capsys, tmp_path, "localalg", "--n", str(n), "--arity", "5")
    model = tmp_path / "model.json"
    code, out, _ = run(capsys, "transfer", path, "--out", str(model))
    assert code == OK
    doc = json.loads(model.read_text())
    assert doc["clean"] is True
    write_json(model, doc["model"])
    code, out, _ = run(capsys, "dual", str(model), "--jet", "5")
    d = json.loads(out)
    assert code == OK and d["hilbert"] == [1] * n + [0] * (6 - n)


def test_deform_and_specialize(capsys, tmp_path):
    path = fixture(capsys, tmp_path, "killtarget", "--seed", "1")
    code, out, _ = run(capsys, "deform", path, "--jet", "3")
    d = json.loads(out)
    assert code == OK and d["square_zero"] and d["augmentation_is_m1"]
    code, out, _ = run(capsys, "specialize", path, "--xi", "e0=1/2", "--xi", "e1=-1")
    d = json.loads(out)
    assert code == OK and d["xi"] == {"e0": "1/2", "e1": "-1/1"}
    assert any(v["eps"] for v in d["d"].values())


def test_specialize_unknown_label(capsys, tmp_path):
    path = fixture(capsys, tmp_path, "killtarget")
    assert run(capsys, "specialize", path, "--xi", "nope=1")[0] == INPUT
    assert run(capsys, "specialize", path, "--xi", "e0")[0] == INPUT


def test_kill_and_pipeline(capsys, tmp_path):
    path = fixture(capsys, tmp_path, "killtarget", "--seed", "2")
    code, out, _ = run(capsys, "kill", path)
    d = json.loads(out)
    assert code == OK and [s["stage"] for s in d["stages"]] == [2, 3, 4]
    code, out, _ = run(capsys, "bn-pipeline", path)
    d = json.loads(out)
    assert code == OK and d["pass"] is True
    assert set(d["ranks"]) == {"0", "1"}


def test_petri_failure_exit_code(capsys, tmp_path):
    import random
    P = product_free_pair(random.Random(3), g=3, h0=2, h1=3, surjective=False)
    path = tmp_path / "bad.json"
    write_json(path, structure_to_json(P))
    code, _, err = run(capsys, "kill", str(path))
    assert code == PROPERTY and "rank defect" in err


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": \n "ainf/v1" oops}')
    code, _, err = run(capsys, "check", str(bad))
    assert code == INPUT and "line 2" in err
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == INPUT
    assert run(capsys, "fixture", "nonsense")[0] == INPUT
    assert run(capsys, "fixture", "randomdg", "--arity", "1")[0] == INPUT
    assert run(capsys, "fixture", "randomdg", "--field", "R")[0] == INPUT


def test_field_mismatch(capsys, tmp_path):
    path = fixture(capsys, tmp_path, "randomdg", "--field", "Fp:7")
    assert run(capsys, "check", path, "--field", "Q")[0] == INPUT
    assert run(capsys, "check", path, "--field", "Fp:7")[0] == OK


def test_same_seed_same_bytes(capsys, tmp_path):
    a = fixture(capsys, tmp_path, "perturb", "--seed", "9")
    first = open(a, "rb").read()
    b = fixture(capsys, tmp_path, "perturb", "--seed", "9")
    assert open(b, "rb").read() == first
