"""Killing the higher module products A_1^{n} x M_0 -> M_1 by homotopies.

Stage n solves sigma o f_n = T_n, where T_n(a_1..a_n)(x) is the M_1 part of
m_{n+1}(a_1..a_n, x), and transports the pair along the homotopy with the
single component +-f_n.  The sign is the one that kills the component.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import gmpy2

from .bar import transported_products
from .core import AInfPair, HomotopyData, feasible_words
from .foundation import GradedSpace, LinearMap, NotSurjective, rank, right_inverse


class PetriFails(ValueError):
    def __init__(self, defect):
        super().__init__(f"pairing is not surjective (rank defect {defect})")
        self.defect = defect


class SignAmbiguity(RuntimeError):
    pass


def _pair_label(P, b, a):
    return f"{P.gens[b].label}|{P.gens[a].label}"


def sigma_map(P: AInfPair) -> LinearMap:
    """sigma: A_1 -> Hom(M_0, M_1), sigma(e)(x) = m_2(e, x)."""
    A1, M0, M1 = P.algebra_gens(1), P.module_gens(0), P.module_gens(1)
    src = GradedSpace({0: tuple(P.gens[e].label for e in A1)})
    tgt = GradedSpace({0: tuple(_pair_label(P, b, a) for b in M1 for a in M0)})
    entries = {}
    for e in A1:
        img = {}
        for a in M0:
            for b, c in P.table.get((e, a), {}).items():
                if b in M1:
                    img[_pair_label(P, b, a)] = c
        entries[(0, P.gens[e].label)] = img
    return LinearMap(src, tgt, 0, entries, P.field)


@dataclass
class KillTarget:
    pair: AInfPair
    A1: list
    M0: list
    M1: list
    sigma: LinearMap
    history: list = dc_field(default_factory=list)

    @classmethod
    def from_pair(cls, P: AInfPair) -> "KillTarget":
        return cls(P, P.algebra_gens(1), P.module_gens(0), P.module_gens(1), sigma_map(P))

    def targeted(self, k: int) -> dict:
        """Arity-k products A_1^{k-1} x M_0 -> M_1 as {word: {M_1 gen: coef}}."""
        P = self.pair
        a1, m0, m1 = set(self.A1), set(self.M0), set(self.M1)
        out = {}
        for w, vec in P.table.items():
            if len(w) == k and w[-1] in m0 and all(e in a1 for e in w[:-1]):
                v = {b: c for b, c in vec.items() if b in m1}
                if v:
                    out[w] = v
        return out


def _size(vecs: dict):
    """Largest |coefficient| (residue representative over F_p); 0 when empty."""
    best = 0
    for v in vecs.values():
        for c in v.values():
            if isinstance(c, (Fraction, int)):
                best = max(best, abs(c))
            else:
                best = max(best, int(c.v) if hasattr(c, "v") else 1)
    return best


def check_petri(t: KillTarget):
    """(sigma surjective, pivot section or None)."""
    try:
        return True, right_inverse(t.sigma)
    except NotSurjective:
        return False, None


def _require_petri(t: KillTarget):
    ok, s = check_petri(t)
    if not ok:
        r = rank(t.sigma.matrix(0), t.pair.field)
        raise PetriFails(len(t.sigma.target.basis(0)) - r)
    return s


@dataclass
class KillStep:
    n: int
    table: dict          # word of A_1 gens -> {A_1 gen: coef}
    sign: int
    before: int
    after: int
    structure: AInfPair = dc_field(repr=False, default=None)

    def to_json(self, P: AInfPair) -> dict:
        fmt = P.field.format_scalar
        return {
            "stage": self.n,
            "sign": self.sign,
            "residual_before": str(self.before),
            "residual_after": str(self.after),
            "f": [{"inputs": [P.gens[i].label for i in w],
                   "output": {P.gens[o].label: fmt(c) for o, c in sorted(v.items())}}
                  for w, v in sorted(self.table.items())],
        }


def lift(t: KillTarget, n: int, section: LinearMap) -> dict:
    """f_n with sigma o f_n = T_n, via the section."""
    P = t.pair
    lab2gen = {P.gens[e].label: e for e in t.A1}
    fast = P.field.characteristic == 0
    num = (lambda c: gmpy2.mpq(c.numerator, c.denominator)) if fast else (lambda c: c)
    sec = {}
    for b in t.M1:
        for a in t.M0:
            lab = _pair_label(P, b, a)
            sec[(b, a)] = [(lab2gen[el], num(x)) for el, x in section(0, lab).items()]
    table = {}
    for w, vec in t.targeted(n + 1).items():
        out = table.setdefault(w[:-1], {})
        for b, c in vec.items():
            c = num(c)
            for e, x in sec[(b, w[-1])]:
                out[e] = out.get(e, 0) + c * x
    back = (lambda c: Fraction(int(c.numerator), int(c.denominator))) if fast else (lambda c: c)
    return {w: {e: back(c) for e, c in sorted(v.items()) if c} for w, v in sorted(table.items())
            if any(v.values())}


def _transport_stage(P: AInfPair, H: HomotopyData, words, n) -> AInfPair:
    """P transported along H, recomputing only ``words``; shorter products are untouched.

    Valid because P is minimal and H has no component below arity n.
    """
    new = transported_products(P, H, words, fixed_below=n + 1)
    redo = set(words)
    table = {w: v for w, v in P.table.items() if w not in redo}
    table.update(new)
    return P.with_table(table)


_SAMPLE = 8


def kill_stage(t: KillTarget, n: int, section: LinearMap | None = None):
    section = section or _require_petri(t)
    P = t.pair
    target = t.targeted(n + 1)
    before = _size(target)
    table = lift(t, n, section)
    if not table:
        return KillStep(n, {}, 1, before, before, P), t
    H = HomotopyData(P, table)
    m1 = set(t.M1)
    # a few support words separate the signs; the full result is verified below
    support = sorted(target)[:_SAMPLE]
    words = [w for k in range(n + 1, P.max_arity + 1) for w in feasible_words(P, k, offset=2)]
    for sign in (1, -1):
        Hs = H.scaled(sign)
        trial = transported_products(P, Hs, support, fixed_below=n + 1)
        if any(b in m1 for v in trial.values() for b in v):
            continue
        newP = _transport_stage(P, Hs, words, n)
        new = KillTarget(newP, t.A1, t.M0, t.M1, t.sigma, list(t.history))
        after = _size(new.targeted(n + 1))
        if after:
            continue
        step = KillStep(n, {w: {e: sign * c for e, c in v.items()} for w, v in table.items()},
                        sign, before, after, newP)
        new.history.append(step)
        return step, new
    raise SignAmbiguity(f"neither sign kills the arity-{n + 1} component")


def kill_all(t: KillTarget, N: int | None = None) -> KillTarget:
    """Stages n = 2..N-1, so m_k vanishes on the targeted component for 3 <= k <= N."""
    N = N or t.pair.max_arity
    section = _require_petri(t)
    for n in range(2, N):
        _, t = kill_stage(t, n, section)
    return t


def killlog(t: KillTarget) -> dict:
    return {"schema": "killlog/v1", "stages": [s.to_json(t.pair) for s in t.history]}
