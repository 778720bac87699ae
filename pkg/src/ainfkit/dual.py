"""The dual algebra A^! of a positively graded A-infinity algebra, truncated
at word length K.

A^! is the tensor algebra on A_1^* modulo the two-sided ideal generated by
one relation per basis vector beta of A_2:

    r_beta = sum_n (-1)^{n(n-1)/2} <beta^*, m_n(e_i1, ..., e_in)> e^*_i1 ... e^*_in

Words are tuples of generator positions.  The truncated ideal is echelonized
with the shortest (then lexicographically smallest) word as pivot, which is
the right leading term for a completed algebra; the non-pivot words form the
normal basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .core import AInfFunctor, AInfPair, AInfStructure, StructureError
from .foundation import Echelon, FieldSpec, vec_add
from .jets import JetIdeal, JetPoly, monomials


class NotPositivelyGraded(ValueError):
    pass


def _binom2(n):
    return n * (n - 1) // 2


def algebra_object(S: AInfStructure, obj=None) -> str:
    if obj is not None:
        return obj
    if isinstance(S, AInfPair):
        return AInfPair.Y
    if len(S.objects) == 1:
        return S.objects[0]
    raise StructureError("several objects: name the one carrying the algebra")


def word_key(w):
    return (len(w), w)


class TruncatedDualAlgebra:
    def __init__(self, S: AInfStructure, K: int, obj=None, check_positive=True):
        obj = algebra_object(S, obj)
        self.structure = S
        self.obj = obj
        self.K = K
        self.field: FieldSpec = S.field
        alg = S.gens_between(obj, obj)
        if check_positive and any(S.deg[i] <= 0 for i in alg):
            raise NotPositivelyGraded(f"Hom({obj},{obj}) has elements of degree <= 0")
        self.gens = [i for i in alg if S.deg[i] == 1]
        self.pos = {g: k for k, g in enumerate(self.gens)}
        self.labels = [S.gens[i].label for i in self.gens]
        self.a2 = [i for i in alg if S.deg[i] == 2]
        self.relations = self._relations()
        self.ech = Echelon(key=word_key)
        self._close_ideal()

    @property
    def ngens(self):
        return len(self.gens)

    def _relations(self) -> dict:
        rel = {b: {} for b in self.a2}
        pos = self.pos
        for w, vec in self.structure.table.items():
            if len(w) > self.K or not all(a in pos for a in w):
                continue
            word = tuple(pos[a] for a in w)
            sign = -1 if _binom2(len(w)) & 1 else 1
            for b, c in vec.items():
                if b in rel:
                    vec_add(rel[b], {word: sign * c})
        return {b: r for b, r in rel.items() if r}

    def _words(self, L):
        return list(iproduct(range(self.ngens), repeat=L))

    def _close_ideal(self):
        K = self.K
        for r in self.relations.values():
            lo = min(len(w) for w in r)
            room = K - lo
            for a in range(room + 1):
                for b in range(room - a + 1):
                    for x in self._words(a):
                        for y in self._words(b):
                            v = {x + w + y: c for w, c in r.items() if len(x) + len(w) + len(y) <= K}
                            if v:
                                self.ech.add(v)

    # ------------------------------------------------------------ arithmetic
    def normal_form(self, elem: dict) -> dict:
        return self.ech.reduce({w: c for w, c in elem.items() if len(w) <= self.K and c})

    def multiply(self, r1: dict, r2: dict) -> dict:
        out = {}
        K = self.K
        for w1, c1 in r1.items():
            for w2, c2 in r2.items():
                if len(w1) + len(w2) <= K:
                    w = w1 + w2
                    out[w] = out.get(w, 0) + c1 * c2
        return self.normal_form(out)

    def one(self) -> dict:
        return {(): self.field.one}

    def gen(self, k) -> dict:
        return self.normal_form({(k,): self.field.one})

    def in_ideal(self, elem: dict) -> bool:
        return not self.normal_form(elem)

    def hilbert(self) -> list:
        piv = {}
        for w in self.ech.rows:
            piv[len(w)] = piv.get(len(w), 0) + 1
        return [self.ngens ** L - piv.get(L, 0) for L in range(self.K + 1)]

    def normal_basis(self) -> list:
        return [w for L in range(self.K + 1) for w in self._words(L) if w not in self.ech.rows]

    def relation_words(self) -> list:
        return [dict(r) for _, r in sorted(self.relations.items())]


def dual_algebra(S: AInfStructure, K: int, obj=None) -> TruncatedDualAlgebra:
    return TruncatedDualAlgebra(S, K, obj)


def dual_multiply(R: TruncatedDualAlgebra, r1: dict, r2: dict) -> dict:
    return R.multiply(r1, r2)


# ---------------------------------------------------------------- functoriality


@dataclass
class DualMap:
    """Algebra map B^! -> A^! given by the images of the generators of B^!."""

    source: TruncatedDualAlgebra  # B^!
    target: TruncatedDualAlgebra  # A^!
    images: list

    def __call__(self, elem: dict) -> dict:
        A = self.target
        out = {}
        for w, c in elem.items():
            acc = A.one()
            for k in w:
                acc = A.multiply(acc, self.images[k])
                if not acc:
                    break
            vec_add(out, acc, c)
        return A.normal_form(out)

    def respects_relations(self) -> bool:
        return all(not self(r) for r in self.source.relations.values())

    def __eq__(self, other):
        return isinstance(other, DualMap) and self.images == other.images


def induced_dual_map(f: AInfFunctor, RA: TruncatedDualAlgebra, RB: TruncatedDualAlgebra) -> DualMap:
    """f^! : B^! -> A^! for f : A -> B, pairing dual words with the bar components of f."""
    if f.object_map.get(RA.obj) != RB.obj:
        raise StructureError("functor does not send the algebra object to the algebra object")
    images = [dict() for _ in range(RB.ngens)]
    for w, vec in f.table.items():
        if len(w) > RA.K or not all(a in RA.pos for a in w):
            continue
        word = tuple(RA.pos[a] for a in w)
        sign = -1 if _binom2(len(w)) & 1 else 1
        for b, c in vec.items():
            k = RB.pos.get(b)
            if k is not None:
                vec_add(images[k], {word: sign * c})
    return DualMap(RB, RA, [RA.normal_form(im) for im in images])


def identity_dual_map(R: TruncatedDualAlgebra) -> DualMap:
    return DualMap(R, R, [R.gen(k) for k in range(R.ngens)])


def compose_dual_maps(second: DualMap, first: DualMap) -> DualMap:
    """second o first."""
    return DualMap(first.source, second.target, [second(im) for im in first.images])


# ---------------------------------------------------------------- abelianization


class CommutativeJetRing:
    """k[t_1..t_g] modulo an ideal, truncated at total degree K."""

    def __init__(self, nvars: int, K: int, relations=(), field: FieldSpec | None = None):
        self.nvars, self.K = nvars, K
        self.field = field
        self.ideal = JetIdeal(nvars, K, list(relations))

    def poly(self, terms) -> JetPoly:
        return JetPoly(self.nvars, self.K, terms)

    def var(self, i) -> JetPoly:
        return JetPoly.var(self.nvars, self.K, i)

    def normal_form(self, p: JetPoly) -> JetPoly:
        return JetPoly(self.nvars, self.K, self.ideal.realized().reduce(p.terms))

    def multiply(self, a: JetPoly, b: JetPoly) -> JetPoly:
        return self.normal_form(a * b)

    def hilbert(self) -> list:
        free = [0] * (self.K + 1)
        for m in monomials(self.nvars, self.K):
            free[sum(m)] += 1
        for d, n in enumerate(self.ideal.dims()):
            free[d] -= n
        return free


def word_to_monomial(word, nvars) -> tuple:
    e = [0] * nvars
    for k in word:
        e[k] += 1
    return tuple(e)


def abelianize(R: TruncatedDualAlgebra):
    """(jet ring, quotient map) for the abelianization of R."""
    n = R.ngens

    def raw(elem):
        terms = {}
        for w, c in elem.items():
            m = word_to_monomial(w, n)
            terms[m] = terms.get(m, 0) + c
        return JetPoly(n, R.K, terms)

    ring = CommutativeJetRing(n, R.K, [raw(r) for r in R.relations.values()], R.field)

    def quotient(elem: dict) -> JetPoly:
        return ring.normal_form(raw(elem))

    ring.raw_image = raw
    return ring, quotient


def dual_to_json(R: TruncatedDualAlgebra) -> dict:
    fmt = R.field.format_scalar
    return {
        "schema": "dualalg/v1",
        "generators": R.labels,
        "K": R.K,
        "relations": [{",".join(map(str, w)): fmt(c) for w, c in sorted(r.items(), key=lambda x: word_key(x[0]))}
                      for r in R.relation_words()],
        "normal_basis": [list(w) for w in R.normal_basis()],
        "hilbert": R.hilbert(),
    }
