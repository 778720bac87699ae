import random

import pytest

from ainfkit.core import check_ainf
from ainfkit.fixtures import kill_target_fixture, product_free_pair
from ainfkit.foundation import QQ, FieldSpec
from ainfkit.kill import KillTarget, PetriFails, check_petri, kill_all, kill_stage, killlog, lift


def m2_part(P):
    return {w: v for w, v in P.table.items() if len(w) == 2}


@pytest.fixture(scope="module", params=range(4))
def killed(request):
    t = KillTarget.from_pair(kill_target_fixture(request.param))
    return t, kill_all(t, 5)


def test_targets_start_nonzero(killed):
    t, _ = killed
    assert any(t.targeted(k) for k in (3, 4, 5))


def test_targeted_components_vanish(killed):
    _, out = killed
    for k in (3, 4, 5):
        assert out.targeted(k) == {}


def test_m2_preserved(killed):
    t, out = killed
    assert m2_part(out.pair) == m2_part(t.pair)


def test_intermediates_are_valid(killed):
    t, out = killed
    assert check_ainf(t.pair) == []
    assert [s.n for s in out.history] == [2, 3, 4]
    for s in out.history:
        assert check_ainf(s.structure) == []
        assert s.after == 0


def test_lift_solves_sigma_equation(killed):
    t, _ = killed
    _, section = check_petri(t)
    table = lift(t, 2, section)
    P = t.pair
    for w, vec in t.targeted(3).items():
        for b, c in vec.items():
            # sigma(f_2(a1, a2))(x) recovers T_2(a1, a2)(x)
            got = sum(x * P.table.get((e, w[-1]), {}).get(b, 0) for e, x in table.get(w[:-1], {}).items())
            assert got == c


def test_sign_pattern(killed):
    _, out = killed
    signs = {s.n: s.sign for s in out.history if s.table}
    assert signs == {n: s for n, s in {2: -1, 3: 1, 4: -1}.items() if n in signs}


def test_idempotent_on_killed(killed):
    _, out = killed
    step, again = kill_stage(out, 2)
    assert step.table == {} and again.pair is out.pair


def test_petri_fails_reports_defect():
    P = product_free_pair(random.Random(3), g=3, h0=2, h1=3, surjective=False)
    t = KillTarget.from_pair(P)
    ok, _ = check_petri(t)
    assert not ok
    with pytest.raises(PetriFails) as err:
        kill_all(t, 4)
    assert err.value.defect == 3


def test_killlog(killed):
    _, out = killed
    log = killlog(out)
    assert log["schema"] == "killlog/v1"
    assert [s["stage"] for s in log["stages"]] == [2, 3, 4]
    assert all(s["residual_after"] == "0" for s in log["stages"])


def test_kill_over_finite_field():
    F = FieldSpec(101)
    t = KillTarget.from_pair(kill_target_fixture(7, field=F))
    assert t.pair.field == F and t.pair.field != QQ
    out = kill_all(t, 4)
    assert out.targeted(3) == {} and out.targeted(4) == {}
    assert check_ainf(out.pair) == []
