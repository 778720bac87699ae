"""Minimal models of finite dg-categories by homotopy transfer.

The contraction (i, p, h) satisfies ``i p - 1 = m1 h + h m1`` with the side
conditions ``h i = 0``, ``p h = 0``, ``h h = 0``.  The transferred structure
comes from the perturbation lemma on the bar side: with the tensor-trick
homotopy H^ and the perturbation delta (the m_2 part of b),

    F   = p^ sum_k (delta H^)^k           (an A-infinity functor D -> H)
    b'  = F delta i^                       (the minimal structure on H)

evaluated component by component with memoization.  Output correctness is
certified by :func:`check_ainf` and :func:`check_functor`, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .bar import check_functor, from_bar, to_bar
from .core import AInfFunctor, AInfStructure, Gen, check_ainf, feasible_words as _pruned_words, hom_degrees as _hom_degrees
from .foundation import QQ, FieldSpec, GradedSpace, invert, kernel_basis, vec_add, Echelon


class InvalidContraction(ValueError):
    pass


class NotDg(ValueError):
    pass


def is_dg(S: AInfStructure) -> bool:
    return all(len(w) <= 2 for w in S.table)


def _m1_matrix(D: AInfStructure, src_idx, tgt_idx):
    pos = {g: r for r, g in enumerate(tgt_idx)}
    M = [[D.field.zero] * len(src_idx) for _ in tgt_idx]
    for c, g in enumerate(src_idx):
        for o, x in D.table.get((g,), {}).items():
            M[pos[o]][c] = x
    return M


@dataclass
class ContractionData:
    """Inclusion, projection and homotopy between a dg model and its cohomology.

    ``H`` is an :class:`AInfStructure` skeleton (no products) on the cohomology;
    ``i`` maps H indices to D vectors, ``p`` and ``h`` map D indices.
    """

    D: AInfStructure
    H: AInfStructure
    i: dict
    p: dict
    h: dict

    def verify(self) -> list:
        """Names of violated contraction identities (empty when valid)."""
        D, H = self.D, self.H
        m1 = {g: D.table.get((g,), {}) for g in range(len(D.gens))}

        def apply(mp, vec):
            out = {}
            for g, c in vec.items():
                vec_add(out, mp.get(g, {}), c)
            return out

        bad = []
        for y in range(len(H.gens)):
            if apply(self.p, self.i.get(y, {})) != {y: 1}:
                bad.append("pi = id")
                break
            if apply(self.h, self.i.get(y, {})):
                bad.append("hi = 0")
                break
            if apply(m1, self.i.get(y, {})):
                bad.append("i is a chain map")
                break
        for g in range(len(D.gens)):
            e = {g: 1}
            lhs = apply(self.i, apply(self.p, e))
            vec_add(lhs, e, -1)
            rhs = apply(m1, apply(self.h, e))
            vec_add(rhs, apply(self.h, apply(m1, e)))
            if lhs != rhs:
                bad.append("ip - 1 = m1 h + h m1")
                break
            if apply(self.p, apply(self.h, e)):
                bad.append("ph = 0")
                break
            if apply(self.h, apply(self.h, e)):
                bad.append("hh = 0")
                break
            if apply(self.p, apply(m1, e)):
                bad.append("p is a chain map")
                break
        return bad


def contraction_from_dg(D: AInfStructure) -> ContractionData:
    """Deterministic splitting C = H + B + W of every hom complex, degree by degree."""
    f = D.field
    blocks = {}
    for g in range(len(D.gens)):
        blocks.setdefault((D.src[g], D.tgt[g], D.deg[g]), []).append(g)
    hom = {}
    reps = {}      # (s,t,d) -> list of (label, D-vector)
    pmap, hmap = {}, {}
    for (s, t, d), idx in sorted(blocks.items()):
        prev = blocks.get((s, t, d - 1), [])
        nxt = blocks.get((s, t, d + 1), [])
        pos = {g: r for r, g in enumerate(idx)}
        # cocycles Z, complement W at non-pivot columns of rref(Z)
        Mout = _m1_matrix(D, idx, nxt) if nxt else []
        Z = kernel_basis(Mout, len(idx), f)
        ez = Echelon()
        for z in Z:
            ez.add({c: x for c, x in enumerate(z) if x})
        W = [c for c in range(len(idx)) if c not in ez.rows]
        # boundaries from the complement W in degree d-1
        prev_W = _complement(D, prev, blocks.get((s, t, d), []), f) if prev else []
        Bvecs = []
        for w in prev_W:
            img = {}
            for c, x in w.items():
                for o, y in D.table.get((prev[c],), {}).items():
                    img[pos[o]] = img.get(pos[o], 0) + x * y
            Bvecs.append({k: v for k, v in img.items() if v})
        # cohomology representatives: cocycles reduced against B, kept if independent
        Hvecs = []
        eb2 = Echelon()
        for b in Bvecs:
            eb2.add(b)
        for z in Z:
            zr = eb2.reduce({c: x for c, x in enumerate(z) if x})
            if zr and eb2.add(zr):
                Hvecs.append(zr)
        labels = []
        for hv in Hvecs:
            piv = min(hv)
            labels.append(f"[{D.gens[idx[piv]].label}]")
        if len(set(labels)) != len(labels):
            labels = [f"{lab}#{k}" for k, lab in enumerate(labels)]
        reps[(s, t, d)] = list(zip(labels, Hvecs))
        if labels:
            hom.setdefault((s, t), {})[d] = tuple(labels)
        # basis change: columns [H | m1(W_prev) | W]
        cols = [hv for hv in Hvecs] + Bvecs + [{c: f.one} for c in W]
        n = len(idx)
        if len(cols) != n:
            raise InvalidContraction(f"splitting failed in ({s},{t}) degree {d}")
        Mat = [[cols[j].get(r, f.zero) for j in range(n)] for r in range(n)]
        inv = invert(Mat, f)
        nh, nb = len(Hvecs), len(Bvecs)
        for r, g in enumerate(idx):
            coords = [inv[j][r] for j in range(n)]
            pmap[g] = {("H", s, t, d, j): coords[j] for j in range(nh) if coords[j]}
            hv = {}
            for j in range(nb):
                cj = coords[nh + j]
                if cj:
                    for c, x in prev_W[j].items():
                        hv[prev[c]] = hv.get(prev[c], 0) - cj * x
            hmap[g] = {k: v for k, v in hv.items() if v}
    H = AInfStructure(D.objects, {k: GradedSpace(v) for k, v in hom.items()}, {}, D.max_arity, f)
    hidx = {}
    for (s, t, d), lst in reps.items():
        for j, (lab, _) in enumerate(lst):
            hidx[("H", s, t, d, j)] = H.index[Gen(s, t, d, lab)]
    imap = {}
    for (s, t, d), lst in reps.items():
        idx = blocks[(s, t, d)]
        for j, (lab, hv) in enumerate(lst):
            imap[hidx[("H", s, t, d, j)]] = {idx[c]: x for c, x in hv.items()}
    pmap = {g: {hidx[k]: x for k, x in v.items()} for g, v in pmap.items()}
    return ContractionData(D, H, imap, {g: v for g, v in pmap.items() if v},
                           {g: v for g, v in hmap.items() if v})


def _complement(D, idx, nxt_idx, f):
    """Standard vectors (as {local col: 1}) complementing the cocycles of ``idx``."""
    Mout = _m1_matrix(D, idx, nxt_idx) if nxt_idx else []
    Z = kernel_basis(Mout, len(idx), f)
    ez = Echelon()
    for z in Z:
        ez.add({c: x for c, x in enumerate(z) if x})
    return [{c: f.one} for c in range(len(idx)) if c not in ez.rows]


@dataclass
class MinimalModel:
    structure: AInfStructure
    contraction: ContractionData
    max_arity: int
    _engine: "_Transfer" = dc_field(repr=False, default=None)

    def functor(self) -> AInfFunctor:
        """The functor D -> H with F_1 = p, materialized up to the arity bound."""
        return self._engine.functor_table_full(self.structure)


class _Transfer:
    def __init__(self, c: ContractionData, N: int):
        self.c = c
        self.N = N
        D = c.D
        self.D = D
        self.b2 = to_bar({w: v for w, v in D.table.items() if len(w) == 2}, D.deg)
        self.b2_by_first = {}
        for (a, b), v in self.b2.items():
            self.b2_by_first.setdefault(a, []).append((b, v))
        self.ip = {}
        for g in range(len(D.gens)):
            out = {}
            for y, x in c.p.get(g, {}).items():
                vec_add(out, c.i.get(y, {}), x)
            if out:
                self.ip[g] = out
        self.h = c.h
        self.p = c.p
        self.memo = {}
        self.spar = D.spar

    def delta(self, w):
        """The m_2 part of b on a word: {word: coef}."""
        out = {}
        sp = self.spar
        s = 0
        for j in range(len(w) - 1):
            for b, vec in self.b2_by_first.get(w[j], ()):
                if b == w[j + 1]:
                    sign = -1 if s & 1 else 1
                    for g, x in vec.items():
                        key = w[:j] + (g,) + w[j + 2:]
                        out[key] = out.get(key, 0) + sign * x
            s += sp[w[j]]
        return {k: v for k, v in out.items() if v}

    def Hhat(self, w):
        """Tensor-trick homotopy: sum_j (ip)^{j-1} (x) h (x) id^{n-j}."""
        out = {}
        sp = self.spar
        prefixes = [((), 1)]
        s = 0
        for j, a in enumerate(w):
            hv = self.h.get(a)
            if hv:
                sign = -1 if s & 1 else 1
                tail = w[j + 1:]
                for pre, cp in prefixes:
                    for g, x in hv.items():
                        key = pre + (g,) + tail
                        out[key] = out.get(key, 0) + sign * cp * x
            ipv = self.ip.get(a)
            if not ipv:
                break
            prefixes = [(pre + (g,), cp * x) for pre, cp in prefixes for g, x in ipv.items()]
            s += sp[a]
        return {k: v for k, v in out.items() if v}

    def F(self, w) -> dict:
        """Bar component of the projection functor on a D word."""
        if len(w) == 1:
            return self.p.get(w[0], {})
        got = self.memo.get(w)
        if got is not None:
            return got
        out = {}
        for w1, c1 in self.Hhat(w).items():
            for w2, c2 in self.delta(w1).items():
                vec_add(out, self.F(w2), c1 * c2)
        self.memo[w] = out
        return out

    def iword(self, y):
        words = [((), 1)]
        for a in y:
            words = [(w + (g,), c * x) for w, c in words for g, x in self.c.i.get(a, {}).items()]
        return words

    def bprime(self, y) -> dict:
        out = {}
        for w, c in self.iword(y):
            for w2, c2 in self.delta(w).items():
                vec_add(out, self.F(w2), c * c2)
        return out

    def structure(self) -> AInfStructure:
        H = self.c.H
        table = {}
        for n in range(2, self.N + 1):
            for y in _pruned_words(H, n, offset=2):
                v = self.bprime(y)
                if v:
                    table[y] = v
        return H.with_table(from_bar(table, H.deg), self.N)

    def functor_table_full(self, Hs: AInfStructure) -> AInfFunctor:
        D = self.D
        table = {}
        for g in range(len(D.gens)):
            v = self.p.get(g)
            if v:
                table[(g,)] = dict(v)
        degs = _hom_degrees(Hs)
        for n in range(2, self.N + 1):
            for w in _pruned_words(D, n, offset=1, target_degrees=degs):
                v = self.F(w)
                if v:
                    table[w] = dict(v)
        return AInfFunctor(D, Hs, from_bar(table, D.deg), max_arity=self.N)


def transfer(D: AInfStructure, c: ContractionData | None = None, N: int | None = None) -> MinimalModel:
    """Minimal model of a dg model D (products m_n, n <= N, on cohomology)."""
    if not is_dg(D):
        raise NotDg("transfer expects products of arity at most 2")
    c = c or contraction_from_dg(D)
    bad = c.verify()
    if bad:
        raise InvalidContraction(", ".join(bad))
    N = N or D.max_arity
    eng = _Transfer(c, N)
    return MinimalModel(eng.structure(), c, N, eng)


def certify(model: MinimalModel) -> dict:
    """Arity-by-arity residual counts of check_ainf and check_functor."""
    S = model.structure
    ainf = check_ainf(S)
    fun = check_functor(model.functor())
    out = {}
    for n in range(1, model.max_arity + 1):
        out[n] = {"ainf": sum(1 for r in ainf if r.arity == n),
                  "functor": sum(1 for r in fun if r.arity == n)}
    return out


# ---------------------------------------------------------------- fixtures


def local_algebra_fixture(n: int, N: int = 6, field: FieldSpec = QQ, width: int = 3) -> AInfStructure:
    """Cobar dg model of k[x]/(x^n), truncated at word length ``width``.

    Letters u_1..u_{n-1} (dual to x..x^{n-1}) sit in degree 1; the product is
    concatenation and d(u_c) = sum_{a+b=c} u_a u_b, extended by the graded
    Leibniz rule.  Cohomology is one-dimensional in degrees 1..width-1.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    letters = list(range(1, n))
    words = [()]
    allw = []
    for _ in range(width):
        words = [w + (a,) for w in words for a in letters]
        allw += words
    lab = lambda w: ".".join(f"u{a}" for a in w)
    O = "O"
    g = {w: Gen(O, O, len(w), lab(w)) for w in allw}
    hom = {(O, O): GradedSpace({d: tuple(lab(w) for w in allw if len(w) == d) for d in range(1, width + 1)})}
    one = field.one
    products = {}
    for w in allw:
        for v in allw:
            if len(w) + len(v) <= width:
                products[(g[w], g[v])] = {g[w + v]: one}
    for w in allw:
        if len(w) + 1 > width:
            continue
        out = {}
        for j, c in enumerate(w):
            sign = -1 if j & 1 else 1
            for a in range(1, c):
                key = w[:j] + (a, c - a) + w[j + 1:]
                out[g[key]] = out.get(g[key], 0) + sign * one
        out = {k: v for k, v in out.items() if v}
        if out:
            products[(g[w],)] = out
    return AInfStructure((O,), hom, products, N, field)
