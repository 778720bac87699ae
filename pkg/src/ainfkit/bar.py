"""Truncated bar construction.

All maps here are stored by their cogenerating components: a table
``word -> vector`` giving the projection of the map to word length one.
Coalgebra morphisms (functors) have bar degree 0, the coderivation b has
degree 1, morphism homotopies have degree -1.  The two primitives

* :func:`substitute_all` -- ``[G F^]_1`` for a component table G and a
  coalgebra morphism F (no signs, F is even);
* :func:`substitute_one` -- ``[P (F^ (x) D (x) G^)]_1``, one odd/even map D
  in one slot and morphisms around it, with the Koszul sign of D passing
  the letters on its left;

cover composition, b^2, the functor equation, conjugation and homotopies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .core import (AInfFunctor, AInfStructure, HomotopyData, MorphismHomotopy, NotMinimal,
                   Residual, StructureMismatch, report, suspension_sign)
from .foundation import Echelon, kernel_basis, vec_add


# ---------------------------------------------------------------- sign dictionary


def to_bar(table: dict, deg) -> dict:
    """Apply the suspension sign to every entry (the map is an involution)."""
    out = {}
    for w, vec in table.items():
        s = suspension_sign(deg[i] for i in w)
        out[w] = dict(vec) if s == 1 else {g: -c for g, c in vec.items()}
    return out


from_bar = to_bar


# ---------------------------------------------------------------- primitives


def preimages(table: dict) -> dict:
    """{letter: {length: [(word, coef), ...]}} for the entries of ``table``."""
    pre = {}
    for w, vec in table.items():
        L = len(w)
        for g, c in vec.items():
            pre.setdefault(g, {}).setdefault(L, []).append((w, c))
    return pre


def _choices(letters, pre, budget, min_len=0):
    """Concatenations of preimages of ``letters`` with total length in [min_len, budget].

    ``pre=None`` means the identity.  Returns a list of (word, coefficient).
    """
    if pre is None:
        return [(tuple(letters), 1)] if min_len <= len(letters) <= budget else []
    reach = [0] * (len(letters) + 1)
    for t in range(len(letters) - 1, -1, -1):
        opts = pre.get(letters[t])
        if not opts:
            return []
        reach[t] = reach[t + 1] + max(opts)
    partial = [((), 1)]
    remaining = len(letters)
    for t, g in enumerate(letters):
        remaining -= 1
        opts = pre[g]
        nxt = []
        for w, c in partial:
            room = budget - len(w) - remaining
            need = min_len - len(w) - reach[t + 1]
            for L, lst in opts.items():
                if need <= L <= room:
                    nxt.extend((w + w2, c * c2) for w2, c2 in lst)
        if not nxt:
            return []
        partial = nxt
    return partial


def substitute_all(outer: dict, pre: dict, max_len: int, min_len: int = 0) -> dict:
    res = {}
    for W, vec in outer.items():
        if len(W) > max_len:
            continue
        for w, c in _choices(W, pre, max_len, min_len):
            vec_add(res.setdefault(w, {}), vec, c)
    return {w: v for w, v in res.items() if v}


def substitute_one(outer: dict, special: dict, before, after, parity: int, spar,
                   max_len: int) -> dict:
    """Sum of outer(B(u), D(v), A(z)) over all slots, signed by parity * |u|.

    ``spar`` gives the suspended degree parity of letters of the result words.
    """
    res = {}
    for W, vec in outer.items():
        k = len(W)
        if k > max_len:
            continue
        for i in range(k):
            opts = special.get(W[i])
            if not opts:
                continue
            lefts = _choices(W[:i], before, max_len - (k - i))
            if not lefts:
                continue
            for wl, cl in lefts:
                sl = -1 if parity and (sum(spar[x] for x in wl) & 1) else 1
                for L, lst in opts.items():
                    room = max_len - len(wl) - L
                    if room < k - i - 1:
                        continue
                    rights = _choices(W[i + 1:], after, room)
                    for wv, cv in lst:
                        for wr, cr in rights:
                            vec_add(res.setdefault(wl + wv + wr, {}), vec, sl * cl * cv * cr)
    return {w: v for w, v in res.items() if v}


def _sub(a: dict, b: dict) -> dict:
    out = {w: dict(v) for w, v in a.items()}
    for w, v in b.items():
        vec_add(out.setdefault(w, {}), v, -1)
    return {w: v for w, v in out.items() if v}


def _add(a: dict, b: dict) -> dict:
    out = {w: dict(v) for w, v in a.items()}
    for w, v in b.items():
        vec_add(out.setdefault(w, {}), v)
    return {w: v for w, v in out.items() if v}


# ---------------------------------------------------------------- bar differential


@dataclass
class BarCoderivation:
    """Cogenerating components b_n of the bar differential of ``structure``."""

    structure: AInfStructure
    table: dict
    word_bound: int

    def component(self, n: int) -> dict:
        return {w: v for w, v in self.table.items() if len(w) == n}

    def apply(self, word) -> dict:
        """The coderivation on one basis word: returns {word: coefficient}."""
        S = self.structure
        out = {}
        n = len(word)
        for i in range(n):
            sign = -1 if sum(S.spar[x] for x in word[:i]) & 1 else 1
            for j in range(i + 1, n + 1):
                vec = self.table.get(tuple(word[i:j]))
                if not vec:
                    continue
                for g, c in vec.items():
                    w = tuple(word[:i]) + (g,) + tuple(word[j:])
                    vec_add(out, {w: sign * c})
        return out


def bar_differential(S: AInfStructure, word_bound: int | None = None) -> BarCoderivation:
    W = word_bound or S.max_arity
    return BarCoderivation(S, to_bar(S.table, S.deg), W)


def bar_square(b: BarCoderivation, word_bound: int | None = None) -> dict:
    """[b o b]_1 as an index table word -> vector."""
    S = b.structure
    W = word_bound or b.word_bound
    return substitute_one(b.table, preimages(b.table), None, None, 1, S.spar, W)


def check_bar_square(b: BarCoderivation, word_bound: int | None = None) -> dict:
    """Residual of b^2 grouped by word length: {length: [Residual, ...]}."""
    S = b.structure
    out = {}
    for r in report(S, S, bar_square(b, word_bound)):
        out.setdefault(r.arity, []).append(r)
    return out


# ---------------------------------------------------------------- morphisms


def _degree_zero_words(S: AInfStructure, L: int, letters) -> list:
    words = [()]
    for _ in range(L):
        words = [w + (a,) for w in words for a in letters
                 if not w or S.src[w[-1]] == S.tgt[a]]
    return words


def bar_h0(S: AInfStructure, word_bound: int) -> dict:
    """Kernel of b on bar degree 0, by word length: {L: [vector over words]}.

    Needs a positively graded structure, so that degree 0 of the bar
    construction is spanned by words in degree-1 letters.
    """
    if any(d <= 0 for d in S.deg):
        raise ValueError("bar degree 0 is only computed for positively graded structures")
    letters = [i for i in range(len(S.gens)) if S.deg[i] == 1]
    b = to_bar(S.table, S.deg)
    out = {}
    for L in range(1, word_bound + 1):
        words = _degree_zero_words(S, L, letters)
        images = []
        for w in words:
            img = {}
            for i in range(L):
                for j in range(i + 1, L + 1):
                    for g, c in b.get(w[i:j], {}).items():
                        vec_add(img, {w[:i] + (g,) + w[j:]: c})
            images.append(img)
        cols = sorted({u for img in images for u in img})
        M = [[img.get(u, 0) for img in images] for u in cols]
        basis = kernel_basis(M, len(words), S.field) if cols else kernel_basis([], len(words), S.field)
        out[L] = [{w: c for w, c in zip(words, v) if c} for v in basis]
    return out


def deconcatenation_closed(S: AInfStructure, word_bound: int) -> bool:
    """Whether Delta maps bar H^0 into H^0 (x) H^0, within the word bound."""
    h0 = bar_h0(S, word_bound)
    spans = {L: Echelon() for L in h0}
    for L, vs in h0.items():
        for v in vs:
            spans[L].add(v)
    for L, vs in h0.items():
        for v in vs:
            for k in range(1, L):
                # v split at k is a matrix; its rows and columns must lie in the kernels
                left, right = {}, {}
                for w, c in v.items():
                    left.setdefault(w[k:], {})[w[:k]] = c
                    right.setdefault(w[:k], {})[w[k:]] = c
                if not all(spans[k].contains(x) for x in left.values()):
                    return False
                if not all(spans[L - k].contains(x) for x in right.values()):
                    return False
    return True


def functor_bar_table(F: AInfFunctor) -> dict:
    return to_bar(F.table, F.source.deg)


def functor_from_bar(source, target, table, object_map=None, max_arity=None) -> AInfFunctor:
    return AInfFunctor(source, target, from_bar(table, source.deg), object_map, max_arity)


def check_functor(F: AInfFunctor) -> list:
    """Residual of b' F^ - F^ b (cogenerating part) on source words up to the arity bound."""
    S, T = F.source, F.target
    N = F.max_arity
    f = functor_bar_table(F)
    b = to_bar(S.table, S.deg)
    bt = to_bar(T.table, T.deg)
    lhs = substitute_all(bt, preimages(f), N)
    rhs = substitute_one(f, preimages(b), None, None, 1, S.spar, N)
    return report(S, T, _sub(lhs, rhs))


def compose_functors(G: AInfFunctor, F: AInfFunctor) -> AInfFunctor:
    """G o F, computed as [G^ F^]_1 on the bar side."""
    if F.target.gens != G.source.gens:
        raise StructureMismatch("target of F is not the source of G")
    N = min(F.max_arity, G.max_arity)
    table = substitute_all(functor_bar_table(G), preimages(functor_bar_table(F)), N)
    omap = {o: G.object_map[F.object_map[o]] for o in F.source.objects}
    return functor_from_bar(F.source, G.target, table, omap, N)


def inverse_unipotent(f: dict, n_gens: int, N: int) -> dict:
    """Bar table of the inverse of a morphism whose linear part is the identity."""
    g = {(i,): {i: 1} for i in range(n_gens)}
    pre_f = preimages(f)
    for n in range(2, N + 1):
        comp = substitute_all(g, pre_f, n, n)
        for w, v in comp.items():
            g[w] = {x: -c for x, c in v.items()}
    return g


def conjugate(b: dict, f: dict, g: dict, spar_target, N: int) -> dict:
    """[F^ b^ G^]_1: transport of a coderivation along F with inverse G."""
    pre_g = preimages(g)
    beta = substitute_all(b, pre_g, N)
    return substitute_one(f, preimages(beta), pre_g, pre_g, 1, spar_target, N)


def _fast(table: dict) -> dict:
    return {w: {g: gmpy2.mpq(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                for g, c in v.items()} for w, v in table.items()}


def _exact(table: dict) -> dict:
    return {w: {g: Fraction(int(c.numerator), int(c.denominator)) if type(c) is type(gmpy2.mpq()) else c
                for g, c in v.items()} for w, v in table.items()}


def transport(b: dict, f: dict, spar, N: int) -> dict:
    """The coderivation b' with F^ b = b' F^, solved word length by word length.

    ``f`` is a bar table whose linear part is the identity, so the term of
    [b' F^]_1 with all-identity choices is b' itself and the rest only uses
    shorter components of b'.
    """
    rhs = substitute_one(f, preimages(b), None, None, 1, spar, N)
    pre_f = preimages(f)
    bp = {}
    for k in range(1, N + 1):
        corr = substitute_all(bp, pre_f, k, k)
        for w in set(corr) | {w for w in rhs if len(w) == k}:
            v = dict(rhs.get(w, {}))
            vec_add(v, corr.get(w, {}), -1)
            if v:
                bp[w] = v
    return bp


def transport_on(b: dict, f: dict, spar, words, fixed_below: int = 0) -> dict:
    """b' from F^ b = b' F^, evaluated only on ``words`` (memoized recursion).

    Words shorter than ``fixed_below`` are known to keep their value b(w).
    """
    memo = {}
    lengths = sorted({len(w) for w in f} | {1})

    def rhs(w):
        out = {}
        k = len(w)
        par = 0
        for i in range(k):
            sign = -1 if par & 1 else 1
            for j in range(i + 1, k + 1):
                vec = b.get(w[i:j])
                if not vec:
                    continue
                for g, c in vec.items():
                    fv = f.get(w[:i] + (g,) + w[j:])
                    if fv:
                        vec_add(out, fv, sign * c)
            par += spar[w[i]]
        return out

    flens = [L for L in lengths if L > 1]

    def expand(w, i, u, c, moved, v):
        # blocks covering w[i:], at least one longer than a letter
        k = len(w)
        if i == k:
            if moved:
                sub = bp(u)
                for g, x in sub.items():
                    y = v.get(g, 0) - c * x
                    if y:
                        v[g] = y
                    else:
                        v.pop(g, None)
            return
        fv = f.get(w[i:i + 1])
        if fv:
            for g, x in fv.items():
                expand(w, i + 1, u + (g,), c * x, moved, v)
        for L in flens:
            if i + L > k:
                break
            fv = f.get(w[i:i + L])
            if fv:
                for g, x in fv.items():
                    expand(w, i + L, u + (g,), c * x, True, v)

    def bp(w):
        got = memo.get(w)
        if got is not None:
            return got
        if len(w) < fixed_below:
            return b.get(w, {})
        v = rhs(w)
        if len(w) > 1:
            expand(w, 0, (), 1, False, v)
        memo[w] = v
        return v

    return {w: v for w, v in ((w, bp(tuple(w))) for w in words) if v}


def _transport(S: AInfStructure, H: HomotopyData, N: int) -> dict:
    """Transported product table; rational arithmetic runs on gmpy2 and is converted back."""
    if H.base.gens != S.gens:
        raise StructureMismatch("homotopy and structure have different bases")
    rational = S.field.characteristic == 0
    conv = _fast if rational else (lambda t: t)
    f = to_bar(conv({w: v for w, v in H.functor_table().items() if len(w) <= N}), S.deg)
    b = to_bar(conv({w: v for w, v in S.table.items() if len(w) <= N}), S.deg)
    out = from_bar(transport(b, f, S.spar, N), S.deg)
    return _exact(out) if rational else out


def _transport_by_inverse(S: AInfStructure, H: HomotopyData, N: int) -> dict:
    f = to_bar(H.functor_table(), S.deg)
    g = inverse_unipotent(f, len(S.gens), N)
    b = to_bar({w: v for w, v in S.table.items() if len(w) <= N}, S.deg)
    return from_bar(conjugate(b, f, g, S.spar, N), S.deg)


def transported_products(S: AInfStructure, H: HomotopyData, words, fixed_below: int = 0) -> dict:
    """Products of m + delta(H) on the given index words only.

    ``fixed_below`` may be set to the lowest arity of H when S is minimal.
    """
    if H.base.gens != S.gens:
        raise StructureMismatch("homotopy and structure have different bases")
    rational = S.field.characteristic == 0
    conv = _fast if rational else (lambda t: t)
    words = [tuple(w) for w in words]
    N = max((len(w) for w in words), default=1)
    f = to_bar(conv({w: v for w, v in H.functor_table().items() if len(w) <= N}), S.deg)
    b = to_bar(conv({w: v for w, v in S.table.items() if len(w) <= N}), S.deg)
    out = from_bar(transport_on(b, f, S.spar, words, fixed_below), S.deg)
    return _exact(out) if rational else out


def apply_homotopy(S: AInfStructure, H: HomotopyData, up_to: int | None = None) -> AInfStructure:
    """The structure m + delta(H), i.e. b' = H^ b H^{-1} on the truncated bar side."""
    if not S.is_minimal():
        raise NotMinimal("homotopies act on minimal structures only")
    new = _transport(S, H, up_to or S.max_arity)
    return S.with_table({w: v for w, v in new.items() if len(w) >= 2})


def perturb(S: AInfStructure, H: HomotopyData, up_to: int | None = None) -> AInfStructure:
    """Transport of any structure (m_1 allowed) along the unipotent functor H."""
    return S.with_table(_transport(S, H, up_to or S.max_arity))


def homotopy_functor(S: AInfStructure, H: HomotopyData, target: AInfStructure | None = None) -> AInfFunctor:
    """H viewed as a functor (S, m) -> (S, m + delta(H))."""
    T = target if target is not None else apply_homotopy(S, H)
    return AInfFunctor(S, T, H.functor_table())


def inverse_homotopy(H: HomotopyData, N: int | None = None) -> HomotopyData:
    S = H.base
    N = N or S.max_arity
    g = from_bar(inverse_unipotent(to_bar(H.functor_table(), S.deg), len(S.gens), N), S.deg)
    return HomotopyData(S, {w: v for w, v in g.items() if len(w) >= 2})


def compose_homotopies(H2: HomotopyData, H1: HomotopyData, N: int | None = None) -> HomotopyData:
    """Components of H2 o H1 (apply H1 first)."""
    S = H1.base
    N = N or S.max_arity
    f1 = to_bar(H1.functor_table(), S.deg)
    f2 = to_bar(H2.functor_table(), S.deg)
    t = from_bar(substitute_all(f2, preimages(f1), N), S.deg)
    return HomotopyData(S, {w: v for w, v in t.items() if len(w) >= 2})


# ---------------------------------------------------------------- morphism homotopies


def _homotopy_terms(h: MorphismHomotopy, f: AInfFunctor, g_bar: dict, N: int) -> dict:
    """[b' H^]_1 + [H^ b]_1 with H^ extended by F^ (x) h (x) G^."""
    S, T = h.source, h.target
    hb = to_bar(h.table, S.deg)
    fb = functor_bar_table(f)
    b = to_bar(S.table, S.deg)
    bt = to_bar(T.table, T.deg)
    left = substitute_one(bt, preimages(hb), preimages(fb), preimages(g_bar), 1, S.spar, N)
    right = substitute_one(hb, preimages(b), None, None, 1, S.spar, N)
    return _add(left, right)


def homotopic_functor(f: AInfFunctor, h: MorphismHomotopy) -> AInfFunctor:
    """The functor g with f - g = b'H + Hb, built arity by arity."""
    S = f.source
    N = f.max_arity
    fb = functor_bar_table(f)
    g = {}
    for n in range(1, N + 1):
        terms = _homotopy_terms(h, f, {w: v for w, v in g.items() if len(w) < n}, n)
        for w in {w for w in fb if len(w) == n} | {w for w in terms if len(w) == n}:
            v = dict(fb.get(w, {}))
            vec_add(v, terms.get(w, {}), -1)
            if v:
                g[w] = v
    return functor_from_bar(S, f.target, g, f.object_map, N)


def check_morphism_homotopy(h: MorphismHomotopy, f: AInfFunctor, g: AInfFunctor) -> bool:
    """True iff f - g = b'H + Hb on all words up to the arity bound.

    H is stored by its components and extended through (F (x) H + H (x) G) o Delta,
    so the comultiplicativity identity holds by construction.
    """
    if f.source is not g.source and f.source.gens != g.source.gens:
        return False
    if f.target.gens != g.target.gens:
        return False
    N = min(f.max_arity, g.max_arity)
    fb, gb = functor_bar_table(f), functor_bar_table(g)
    diff = _sub(_sub(fb, gb), _homotopy_terms(h, f, gb, N))
    return not {w: v for w, v in diff.items() if len(w) <= N}


__all__ = [
    "BarCoderivation", "Residual", "apply_homotopy", "bar_differential", "bar_h0", "bar_square",
    "check_bar_square", "check_functor", "check_morphism_homotopy", "compose_functors",
    "compose_homotopies", "conjugate", "deconcatenation_closed", "from_bar", "homotopic_functor", "homotopy_functor",
    "inverse_homotopy", "inverse_unipotent", "perturb", "preimages", "substitute_all", "substitute_one",
    "to_bar", "transport", "transport_on", "transported_products",
]
