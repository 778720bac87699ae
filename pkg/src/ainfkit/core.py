"""Finite A-infinity categories, functors and homotopies.

Conventions.  A basis element is a :class:`Gen` ``(src, tgt, deg, label)``
standing for a morphism ``src -> tgt``.  An input tuple ``(a_1, ..., a_n)``
is composable when ``a_t.src == a_{t+1}.tgt``; the output of ``m_n`` runs
from ``a_n.src`` to ``a_1.tgt``, so ``m_2(f, g)`` plays the role of ``f o g``.

Internally every structure interns its basis to integer indices.  Words are
tuples of indices and vectors are ``{index: scalar}`` dicts with no zeros.
Product tables are stored unsuspended (as ``m_n``); the bar module converts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .foundation import QQ, FieldSpec, GradedSpace, vec_add


class StructureError(ValueError):
    pass


class ArityExceeded(ValueError):
    pass


class ObjectMapMismatch(ValueError):
    pass


class StructureMismatch(ValueError):
    pass


class NotMinimal(ValueError):
    pass


class Gen(NamedTuple):
    src: str
    tgt: str
    deg: int
    label: str

    def __str__(self):
        return f"{self.label}:{self.src}->{self.tgt}[{self.deg}]"


@dataclass(frozen=True)
class Residual:
    arity: int
    inputs: tuple
    value: Mapping  # Gen -> scalar


def parity_sum(values) -> int:
    return sum(values) & 1


def suspension_sign(degs: Iterable[int]) -> int:
    """(-1)^{sum_t (n-t) deg(a_t)}, relating m_n and b_n (also F_n and its bar form)."""
    degs = list(degs)
    n = len(degs)
    e = 0
    for t, d in enumerate(degs, start=1):
        e += (n - t) * d
    return -1 if e & 1 else 1


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


class AInfStructure:
    """A finite A-infinity category with products up to ``max_arity``."""

    def __init__(self, objects, hom, products=None, max_arity: int = 2,
                 field: FieldSpec = QQ, *, table=None, validate: bool = True):
        if max_arity < 1:
            raise StructureError("arity bound must be positive")
        self.objects = tuple(objects)
        self.field = field
        self.max_arity = max_arity
        hom = {tuple(k): (v if isinstance(v, GradedSpace) else GradedSpace(v)) for k, v in hom.items()}
        for (s, t) in hom:
            if s not in self.objects or t not in self.objects:
                raise StructureError(f"hom space ({s},{t}) names an unknown object")
        self.hom = {k: v for k, v in sorted(hom.items()) if v.dim()}
        gens = sorted(Gen(s, t, d, lab) for (s, t), sp in self.hom.items() for d, lab in sp.items())
        self.gens = tuple(gens)
        self.index = {g: i for i, g in enumerate(gens)}
        self.deg = [g.deg for g in gens]
        self.spar = [(g.deg - 1) & 1 for g in gens]
        self.src = [g.src for g in gens]
        self.tgt = [g.tgt for g in gens]
        if table is None:
            table = {}
            for word, out in (products or {}).items():
                w = tuple(self.index[self._gen(a)] for a in word)
                vec = {}
                for g, c in out.items():
                    c = field(c)
                    if c:
                        vec[self.index[self._gen(g)]] = c
                if vec:
                    vec_add(table.setdefault(w, {}), vec)
            table = {w: v for w, v in table.items() if v}
        self.table = table
        if validate:
            self._validate()
        self._by_tgt = None

    # ------------------------------------------------------------------ helpers
    def _gen(self, a) -> Gen:
        g = a if isinstance(a, Gen) else Gen(*a)
        if g not in self.index:
            raise StructureError(f"unknown basis element {g}")
        return g

    def _validate(self):
        for w, vec in self.table.items():
            n = len(w)
            if n == 0 or n > self.max_arity:
                raise StructureError(f"product of arity {n} outside 1..{self.max_arity}")
            for a, b in zip(w, w[1:]):
                if self.src[a] != self.tgt[b]:
                    raise StructureError(f"non-composable input {self.word_gens(w)}")
            d = sum(self.deg[i] for i in w) + 2 - n
            for g in vec:
                if self.deg[g] != d or self.src[g] != self.src[w[-1]] or self.tgt[g] != self.tgt[w[0]]:
                    raise StructureError(f"bad output {self.gens[g]} for {self.word_gens(w)}")

    def with_table(self, table, max_arity=None, validate=False) -> "AInfStructure":
        """Same objects and hom spaces, new product table (index form)."""
        new = object.__new__(AInfStructure)
        new.__dict__.update(self.__dict__)
        new.table = {w: dict(v) for w, v in table.items() if v}
        new.max_arity = max_arity or self.max_arity
        new._by_tgt = None
        if validate:
            new._validate()
        return new

    def word_gens(self, w) -> tuple:
        return tuple(self.gens[i] for i in w)

    def vec_gens(self, v) -> dict:
        return {self.gens[i]: c for i, c in sorted(v.items())}

    def gens_between(self, src, tgt, deg=None) -> list:
        return [i for i, g in enumerate(self.gens)
                if g.src == src and g.tgt == tgt and (deg is None or g.deg == deg)]

    @property
    def degrees(self) -> set:
        return set(self.deg)

    def product(self, *inputs) -> dict:
        w = tuple(self.index[self._gen(a)] for a in inputs)
        return self.vec_gens(self.table.get(w, {}))

    def m(self, n: int) -> dict:
        return {w: v for w, v in self.table.items() if len(w) == n}

    def is_minimal(self) -> bool:
        return not any(len(w) == 1 for w in self.table)

    def composable_words(self, n: int, allowed=None):
        """All composable index words of length n (optionally from ``allowed`` letters)."""
        letters = range(len(self.gens)) if allowed is None else sorted(allowed)
        by_tgt = {}
        for i in letters:
            by_tgt.setdefault(self.tgt[i], []).append(i)
        words = [(i,) for i in letters]
        for _ in range(n - 1):
            words = [w + (j,) for w in words for j in by_tgt.get(self.src[w[-1]], ())]
        return words

    def same_shape(self, other) -> bool:
        return self.gens == other.gens and self.field == other.field

    def __eq__(self, other):
        return (isinstance(other, AInfStructure) and self.same_shape(other)
                and self.objects == other.objects and self.table == other.table)

    def __repr__(self):
        return f"AInfStructure(objects={self.objects}, dim={len(self.gens)}, N={self.max_arity}, entries={len(self.table)})"


class AInfPair(AInfStructure):
    """Two-object structure (X, Y) with Hom(Y,X) = Hom(X,X) = 0.

    A = Hom(Y,Y) is the algebra and M = Hom(X,Y) the module; module products
    are m_n(a_1, ..., a_{n-1}, x).
    """

    X = "X"
    Y = "Y"

    def __init__(self, hom, products=None, max_arity=2, field=QQ, **kw):
        super().__init__((self.X, self.Y), hom, products, max_arity, field, **kw)
        self._check_pair()

    def _check_pair(self):
        for g in self.gens:
            if g.tgt == self.X:
                raise StructureError("pair must have Hom(Y,X) = Hom(X,X) = 0")

    @classmethod
    def from_structure(cls, S: AInfStructure) -> "AInfPair":
        if set(S.objects) != {cls.X, cls.Y}:
            raise StructureError("pair objects must be X and Y")
        new = object.__new__(cls)
        new.__dict__.update(S.__dict__)
        new.objects = (cls.X, cls.Y)
        new._check_pair()
        return new

    def with_table(self, table, max_arity=None, validate=False):
        return AInfPair.from_structure(AInfStructure.with_table(self, table, max_arity, validate))

    def algebra_gens(self, deg=None) -> list:
        return self.gens_between(self.Y, self.Y, deg)

    def module_gens(self, deg=None) -> list:
        return self.gens_between(self.X, self.Y, deg)


class AInfFunctor:
    """Components F_n as one table: source index word -> target index vector.

    The arity-1 entries are stored explicitly (identity included).
    """

    def __init__(self, source: AInfStructure, target: AInfStructure, table, object_map=None,
                 max_arity=None):
        self.source = source
        self.target = target
        self.table = {w: v for w, v in table.items() if v}
        self.object_map = dict(object_map) if object_map else {o: o for o in source.objects}
        self.max_arity = max_arity or min(source.max_arity, target.max_arity)
        self._check_objects()

    def _check_objects(self):
        S, T = self.source, self.target
        for o, fo in self.object_map.items():
            if o not in S.objects or fo not in T.objects:
                raise ObjectMapMismatch(f"object map entry {o}->{fo} names an unknown object")
        for w, vec in self.table.items():
            src = self.object_map.get(S.src[w[-1]])
            tgt = self.object_map.get(S.tgt[w[0]])
            want = sum(S.deg[i] for i in w) + 1 - len(w)
            for g in vec:
                if T.src[g] != src or T.tgt[g] != tgt:
                    raise ObjectMapMismatch(f"component on {S.word_gens(w)} lands in the wrong hom space")
                if T.deg[g] != want:
                    raise StructureError(f"component on {S.word_gens(w)} has the wrong degree")

    @classmethod
    def identity(cls, S: AInfStructure, target: AInfStructure | None = None) -> "AInfFunctor":
        T = target or S
        if T.gens != S.gens:
            raise StructureMismatch("identity components need equal bases")
        one = S.field.one
        return cls(S, T, {(i,): {i: one} for i in range(len(S.gens))})

    def components(self, n: int) -> dict:
        return {w: v for w, v in self.table.items() if len(w) == n}

    def linear_part(self) -> dict:
        return self.components(1)


@dataclass
class HomotopyData:
    """Components F_n (n >= 2) of a homotopy on a minimal structure; F_1 = id."""

    base: AInfStructure
    table: dict

    def __post_init__(self):
        S = self.base
        for w, vec in self.table.items():
            if len(w) < 2:
                raise StructureError("homotopy components start at arity 2")
            want = sum(S.deg[i] for i in w) + 1 - len(w)
            for g in vec:
                if S.deg[g] != want or S.src[g] != S.src[w[-1]] or S.tgt[g] != S.tgt[w[0]]:
                    raise StructureError(f"homotopy component on {S.word_gens(w)} is malformed")
        self.table = {w: dict(v) for w, v in self.table.items() if v}

    def functor_table(self) -> dict:
        one = self.base.field.one
        t = {(i,): {i: one} for i in range(len(self.base.gens))}
        t.update(self.table)
        return t

    def scaled(self, c) -> "HomotopyData":
        if c == 1:
            return self
        if c == -1:
            return HomotopyData(self.base, {w: {g: -x for g, x in v.items()} for w, v in self.table.items()})
        return HomotopyData(self.base, {w: {g: c * x for g, x in v.items()} for w, v in self.table.items()})


@dataclass
class MorphismHomotopy:
    """Components h_n of degree -n between functors with the given source and target."""

    source: AInfStructure
    target: AInfStructure
    table: dict

    def __post_init__(self):
        S, T = self.source, self.target
        for w, vec in self.table.items():
            want = sum(S.deg[i] for i in w) - len(w)
            for g in vec:
                if T.deg[g] != want:
                    raise StructureError("morphism homotopy component has the wrong degree")


# ---------------------------------------------------------------- checks with the paper-form signs


def _occurrences(table):
    """gen -> list of (outer word, position, outer vector)."""
    occ = {}
    for W, vec in table.items():
        for j, g in enumerate(W):
            occ.setdefault(g, []).append((W, j, vec))
    return occ


def ainf_residuals(S: AInfStructure, up_to_arity: int) -> dict:
    """Index-form residual table of the A-infinity constraint (word -> vector)."""
    if up_to_arity > S.max_arity:
        raise ArityExceeded(f"asked for arity {up_to_arity} > bound {S.max_arity}")
    occ = _occurrences(S.table)
    deg = S.deg
    res = {}
    for v, inner in S.table.items():
        l = len(v)
        for g, ci in inner.items():
            for W, j0, outer in occ.get(g, ()):
                k = len(W)
                n = k + l - 1
                if n > up_to_arity:
                    continue
                j = j0 + 1
                eps = l * sum(deg[i] for i in W[:j0])
                sign = -1 if (j + l * (k - j) + eps) & 1 else 1
                w = W[:j0] + v + W[j0 + 1:]
                vec_add(res.setdefault(w, {}), outer, sign * ci)
    return {w: v for w, v in res.items() if v}


def report(S_in: AInfStructure, S_out: AInfStructure, res: dict) -> list:
    out = [Residual(len(w), S_in.word_gens(w), S_out.vec_gens(v)) for w, v in res.items() if v]
    out.sort(key=lambda r: (r.arity, r.inputs))
    return out


def check_ainf(S: AInfStructure, up_to_arity: int | None = None) -> list:
    """Residual report of the A-infinity constraint; empty iff it holds."""
    n = S.max_arity if up_to_arity is None else up_to_arity
    return report(S, S, ainf_residuals(S, n))


def opposite(S: AInfStructure) -> AInfStructure:
    hom = {(t, s): sp for (s, t), sp in S.hom.items()}
    products = {}
    for w, vec in S.table.items():
        n = len(w)
        rev = [S.gens[i] for i in reversed(w)]
        eps = 0
        for a in range(n):
            for b in range(a + 1, n):
                eps += rev[a].deg * rev[b].deg
        sign = -1 if (_binom2(n + 1) + 1 + eps) & 1 else 1
        key = tuple(Gen(g.tgt, g.src, g.deg, g.label) for g in rev)
        products[key] = {Gen(S.tgt[o], S.src[o], S.deg[o], S.gens[o].label): sign * c for o, c in vec.items()}
    cls = AInfStructure
    return cls(S.objects, hom, products, S.max_arity, S.field)


def representable_pair(S: AInfStructure, O: str, X: str) -> AInfPair:
    """Pair with A = Hom(O,O) and M = Hom(X,O), products inherited from S."""
    if O not in S.objects or X not in S.objects:
        raise StructureError("unknown object")
    Y_, X_ = AInfPair.Y, AInfPair.X
    a_idx = S.gens_between(O, O)
    m_idx = S.gens_between(X, O)

    def space(idx):
        d = {}
        for i in idx:
            d.setdefault(S.deg[i], []).append(S.gens[i].label)
        return GradedSpace({k: tuple(v) for k, v in d.items()})

    hom = {(Y_, Y_): space(a_idx), (X_, Y_): space(m_idx)}
    a_set, m_set = set(a_idx), set(m_idx)
    A = lambda i: Gen(Y_, Y_, S.deg[i], S.gens[i].label)
    M = lambda i: Gen(X_, Y_, S.deg[i], S.gens[i].label)
    products = {}
    for w, vec in S.table.items():
        if all(i in a_set for i in w):
            products[tuple(A(i) for i in w)] = {A(o): c for o, c in vec.items()}
        if all(i in a_set for i in w[:-1]) and w[-1] in m_set:
            products[tuple(A(i) for i in w[:-1]) + (M(w[-1]),)] = {M(o): c for o, c in vec.items()}
    return AInfPair(hom, products, S.max_arity, S.field)


def hom_degrees(S: AInfStructure) -> dict:
    out = {}
    for g in S.gens:
        out.setdefault((g.src, g.tgt), set()).add(g.deg)
    return out


def feasible_words(S: AInfStructure, n: int, offset: int, target_degrees=None):
    """Composable words whose output degree sum(deg) + offset - n can be nonzero."""
    tdeg = target_degrees or hom_degrees(S)
    if not S.gens or not tdeg:
        return []
    all_out = set().union(*tdeg.values())
    hi, lo = max(all_out), min(all_out)
    ex = [d - 1 for d in S.deg]
    mn, mx = min(ex), max(ex)
    by_tgt = {}
    for i in range(len(S.gens)):
        by_tgt.setdefault(S.tgt[i], []).append(i)
    res = []

    def rec(w, e):
        rem = n - len(w)
        if e + rem * mn + offset > hi or e + rem * mx + offset < lo:
            return
        if rem == 0:
            if e + offset in tdeg.get((S.src[w[-1]], S.tgt[w[0]]), ()):
                res.append(w)
            return
        for j in by_tgt.get(S.src[w[-1]], ()):
            rec(w + (j,), e + ex[j])

    for i in range(len(S.gens)):
        rec((i,), ex[i])
    return res
