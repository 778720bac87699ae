"""Deformation complexes over the dual algebra.

A module map over A^! is stored as ``{input gen: {(output gen, word): coef}}``
with every word in normal form for the dual algebra ``R``; the input is read
as ``x (x) 1`` and the map is right A^!-linear.

Signs come from the bar differential.  The component with ``p`` extra
morphism inputs ``x_1..x_p`` and ``n`` dual letters is

    (-1)^{C(n+1,2) + p n + p |x| + sum_j (p-j)|x_j|} m_{n+p+1}(e_I, x, x_1..x_p) (x) e*_I

so ``p = 0`` gives the differential c_M.  The checks below certify it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bar import to_bar
from .core import AInfPair, AInfStructure, Gen, StructureError
from .dual import NotPositivelyGraded, TruncatedDualAlgebra, abelianize, word_to_monomial
from .foundation import vec_add
from .jets import JetMatrix, JetPoly

__all__ = [
    "TruncationTooSmall", "NotAdapted", "WrongModuleShape", "NotPositivelyGraded",
    "functor_component", "apply_module_map", "compose_module_maps", "functor_relation_residual",
    "DeformedModuleComplex", "deformed_differential", "specialize_first_order",
    "corollary_formula", "AdaptedChain", "AdaptedComplex", "adapted_complex", "family_matrix",
    "homotopy_transformation", "family_matrices_equivalent",
]


class TruncationTooSmall(ValueError):
    pass


class NotAdapted(ValueError):
    def __init__(self, i, degree):
        super().__init__(f"Hom(P^{i}, O) has a nonzero part in degree {degree}")
        self.i, self.degree = i, degree


class WrongModuleShape(ValueError):
    pass


def _binom2(n):
    return n * (n - 1) // 2


def _nf_grouped(R: TruncatedDualAlgebra, raw: dict) -> dict:
    """Normal form of {(gen, word): c}, one gen at a time."""
    by_gen = {}
    for (y, w), c in raw.items():
        if len(w) <= R.K:
            by_gen.setdefault(y, {})[w] = by_gen.setdefault(y, {}).get(w, 0) + c
    out = {}
    for y in sorted(by_gen):
        for w, c in R.normal_form(by_gen[y]).items():
            out[(y, w)] = c
    return out


def functor_component(S: AInfStructure, O: str, xs, R: TruncatedDualAlgebra, source_obj=None) -> dict:
    """The A^!-linear map F_{O,p}(x_1..x_p) on Hom(., O) (x) A^!.

    ``xs`` are generator indices of S.  For p = 0, ``source_obj`` restricts
    the inputs to Hom(source_obj, O).
    """
    if R.structure is not S or R.obj != O:
        raise StructureError("dual algebra must be built from Hom(O,O) of the same structure")
    xs = tuple(xs)
    p = len(xs)
    deg = S.deg
    tail_sign = sum((p - j) * deg[x] for j, x in enumerate(xs, start=1))
    raw = {}
    for w, vec in S.table.items():
        L = len(w)
        if L < p + 1 or w[L - p:] != xs:
            continue
        x = w[L - p - 1]
        if S.tgt[x] != O or (p == 0 and source_obj is not None and S.src[x] != source_obj):
            continue
        prefix = w[:L - p - 1]
        n = len(prefix)
        if n > R.K or not all(a in R.pos for a in prefix):
            continue
        word = tuple(R.pos[a] for a in prefix)
        sign = -1 if (_binom2(n + 1) + p * n + p * deg[x] + tail_sign) & 1 else 1
        tgt = raw.setdefault(x, {})
        for y, c in vec.items():
            vec_add(tgt, {(y, word): sign * c})
    return {x: _nf_grouped(R, v) for x, v in sorted(raw.items()) if v}


def functor_component_linear(S, O, xs_vectors, R, source_obj=None) -> dict:
    """Multilinear extension: each entry of ``xs_vectors`` is {gen index: coef}."""
    combos = [((), 1)]
    for v in xs_vectors:
        combos = [(t + (g,), c * x) for t, c in combos for g, x in v.items()]
    out = {}
    for t, c in combos:
        for x, img in functor_component(S, O, t, R, source_obj).items():
            vec_add(out.setdefault(x, {}), img, c)
    return {x: v for x, v in out.items() if v}


def apply_module_map(phi: dict, elem: dict, R: TruncatedDualAlgebra) -> dict:
    """phi(sum c x (x) r) for elem = {(x, word): c}."""
    raw = {}
    K = R.K
    for (x, r), c in elem.items():
        for (y, w), c2 in phi.get(x, {}).items():
            if len(w) + len(r) <= K:
                key = (y, w + r)
                raw[key] = raw.get(key, 0) + c * c2
    return _nf_grouped(R, {k: v for k, v in raw.items() if v})


def compose_module_maps(outer: dict, inner: dict, R: TruncatedDualAlgebra) -> dict:
    """outer o inner."""
    return {x: v for x, v in ((x, apply_module_map(outer, img, R)) for x, img in inner.items()) if v}


def _add_maps(acc: dict, phi: dict, coef=1):
    for x, v in phi.items():
        vec_add(acc.setdefault(x, {}), v, coef)
    return acc


def functor_relation_residual(S: AInfStructure, O: str, xs, R: TruncatedDualAlgebra,
                              source_obj=None) -> dict:
    """Left side of the A-infinity functor equation for F_O on (x_1..x_p); zero when it holds.

    Sum over splittings of Phi_{p-q}(x_{q+1}..) o Phi_q(x_1..x_q), plus the
    terms where a bar component b_l eats a consecutive block of the x's.
    """
    xs = tuple(xs)
    p = len(xs)
    spar = S.spar
    if p:
        source_obj = S.tgt[xs[0]]
    out = {}
    for q in range(p + 1):
        inner = functor_component(S, O, xs[:q], R, source_obj if q == 0 else None)
        if not inner:
            continue
        outer = functor_component(S, O, xs[q:], R)
        _add_maps(out, compose_module_maps(outer, inner, R))
    # b_l applied inside the x-string
    for j in range(p):
        for l in range(1, p - j + 1):
            block = xs[j:j + l]
            vec = S.table.get(block)
            if not vec:
                continue
            bvec = to_bar({block: vec}, S.deg)[block]
            before = sum(spar[t] for t in xs[:j])
            phi = functor_component_linear(S, O, [{g: 1} for g in xs[:j]] + [bvec]
                                           + [{g: 1} for g in xs[j + l:]], R)
            for x, img in phi.items():
                sign = -1 if (spar[x] + before) & 1 else 1
                vec_add(out.setdefault(x, {}), img, sign)
    return {x: v for x, v in out.items() if v}


# ------------------------------------------------------------------- c_M


@dataclass
class DeformedModuleComplex:
    pair: AInfPair
    R: TruncatedDualAlgebra
    K: int
    basis: list          # module generator indices
    c: dict              # module map x -> {(y, word): coef}

    def degrees(self) -> dict:
        out = {}
        for x in self.basis:
            out.setdefault(self.pair.deg[x], []).append(x)
        return out

    def apply(self, elem: dict) -> dict:
        return apply_module_map(self.c, elem, self.R)

    def square(self) -> dict:
        """c_M^2 on each x (x) 1, in normal form, on words the arity bound controls."""
        bound = min(self.K, self.pair.max_arity - 1)
        res = {}
        for x in self.basis:
            v = self.apply(self.c.get(x, {}))
            v = {k: c for k, c in v.items() if len(k[1]) <= bound}
            if v:
                res[x] = v
        return res

    def specialize_augmentation(self) -> dict:
        """Image under A^! -> k: x -> {y: coef}."""
        return {x: {y: c for (y, w), c in img.items() if not w} for x, img in self.c.items()
                if any(not w for (_, w) in img)}

    def m1(self) -> dict:
        return {x: dict(self.pair.table[(x,)]) for x in self.basis if (x,) in self.pair.table}

    def to_json(self) -> dict:
        P = self.pair
        fmt = P.field.format_scalar
        deg_of = self.degrees()
        terms = [{"degree": d, "rank": len(xs), "basis": [P.gens[x].label for x in xs]}
                 for d, xs in sorted(deg_of.items())]
        diffs = []
        for x in self.basis:
            polys = {}
            for (y, w), c in sorted(self.c.get(x, {}).items()):
                polys.setdefault(y, {})[",".join(map(str, w))] = fmt(c)
            for y, poly in sorted(polys.items()):
                diffs.append({"row": P.gens[y].label, "col": P.gens[x].label, "poly": poly})
        return {"schema": "defcomplex/v1", "K": self.K, "generators": self.R.labels,
                "terms": terms, "differentials": diffs}


def deformed_differential(P: AInfPair, R: TruncatedDualAlgebra | None = None, K: int = 4) -> DeformedModuleComplex:
    if K < 1:
        raise TruncationTooSmall("word bound must be at least 1")
    if R is None:
        R = TruncatedDualAlgebra(P, K)
    if R.K < K:
        raise TruncationTooSmall(f"dual algebra truncated at {R.K} < {K}")
    basis = P.module_gens()
    c = functor_component(P, P.Y, (), R, source_obj=P.X)
    return DeformedModuleComplex(P, R, K, basis, c)


def specialize_first_order(D: DeformedModuleComplex, xi: dict) -> dict:
    """Push c_M along pi_xi : A^! -> k[eps], e*_i -> e*_i(xi) eps.

    ``xi`` maps A_1 generators (index, Gen or label) to coefficients.  Returns
    ``{x: ({y: c}, {y: c})}`` with the constant and the eps parts.
    """
    R = D.R
    P = D.pair
    coords = [P.field.zero] * R.ngens
    for key, c in xi.items():
        if isinstance(key, str):
            k = R.labels.index(key)
        else:
            g = P.index[key] if isinstance(key, Gen) else key
            k = R.pos[g]
        coords[k] += c
    out = {}
    for x in D.basis:
        const, eps = {}, {}
        for (y, w), c in D.c.get(x, {}).items():
            if not w:
                vec_add(const, {y: c})
            elif len(w) == 1 and coords[w[0]]:
                vec_add(eps, {y: c * coords[w[0]]})
        out[x] = (const, eps)
    return out


def corollary_formula(S: AInfStructure, O: str, xi: dict) -> dict:
    """a -> (m_1(a), m_2(a, xi)) on Hom(O,O), with arguments in the displayed order.

    ``xi`` maps generator indices of S to coefficients.  Keys are labels so the
    result can be compared with the representable pair.
    """
    out = {}
    for a in S.gens_between(O, O):
        const = {S.gens[y].label: c for y, c in S.table.get((a,), {}).items()}
        eps = {}
        for g, c in xi.items():
            for y, c2 in S.table.get((a, g), {}).items():
                vec_add(eps, {S.gens[y].label: c * c2})
        out[S.gens[a].label] = (const, eps)
    return out


# ---------------------------------------------------------------- adapted chains


@dataclass
class AdaptedChain:
    """Objects P^n, P^{n-1}, ... with ``maps[k]`` in Hom(objects[k+1], objects[k])."""

    objects: list
    maps: list           # vectors {gen index: coef}
    O: str


@dataclass
class AdaptedComplex:
    R: TruncatedDualAlgebra
    bases: list          # per term, generator indices of Hom^0(P, O)
    differentials: list  # module maps term k -> term k+1

    def ranks(self):
        return [len(b) for b in self.bases]

    def squares(self) -> list:
        """d o d per position, on the words whose coefficients the arity bound controls."""
        bound = self.R.structure.max_arity - 3
        out = []
        for d1, d2 in zip(self.differentials, self.differentials[1:]):
            sq = compose_module_maps(d2, d1, self.R)
            sq = {x: {k: c for k, c in v.items() if len(k[1]) <= bound} for x, v in sq.items()}
            out.append({x: v for x, v in sq.items() if v})
        return out

    def specialize_augmentation(self) -> list:
        return [{x: {y: c for (y, w), c in img.items() if not w} for x, img in d.items()}
                for d in self.differentials]


def adapted_complex(S: AInfStructure, chain: AdaptedChain, R: TruncatedDualAlgebra) -> AdaptedComplex:
    O = chain.O
    if len(chain.maps) != len(chain.objects) - 1:
        raise StructureError("need one chain map between consecutive objects")
    bases = []
    for i, P in enumerate(chain.objects):
        idx = S.gens_between(P, O)
        for g in idx:
            if S.deg[g] != 0:
                raise NotAdapted(i, S.deg[g])
        bases.append(idx)
    diffs = []
    for k, v in enumerate(chain.maps):
        for g in v:
            if (S.src[g], S.tgt[g], S.deg[g]) != (chain.objects[k + 1], chain.objects[k], 0):
                raise StructureError(f"chain map {k} is not a degree-0 morphism "
                                     f"{chain.objects[k + 1]} -> {chain.objects[k]}")
        diffs.append(functor_component_linear(S, O, [v], R))
    return AdaptedComplex(R, bases, diffs)


# ---------------------------------------------------------------- family matrix


def family_matrix(P: AInfPair, K: int, R: TruncatedDualAlgebra | None = None):
    """(matrix, ring): rows M_1, columns M_0, entries in the abelianized dual algebra."""
    mods = P.module_gens()
    if any(P.deg[x] not in (0, 1) for x in mods):
        raise WrongModuleShape("module must live in degrees 0 and 1")
    if any((x,) in P.table for x in mods):
        raise WrongModuleShape("m_1 must vanish on the module")
    M0, M1 = P.module_gens(0), P.module_gens(1)
    if not M0 or not M1:
        raise WrongModuleShape("need both M_0 and M_1 nonzero")
    R = R or TruncatedDualAlgebra(P, K)
    ring, _ = abelianize(R)
    n = R.ngens
    raw = {(b, a): {} for b in M1 for a in M0}
    for w, vec in P.table.items():
        x = w[-1]
        if x not in M0 or len(w) - 1 > K or not all(e in R.pos for e in w[:-1]):
            continue
        nn = len(w) - 1
        sign = -1 if _binom2(nn + 1) & 1 else 1
        mono = word_to_monomial([R.pos[e] for e in w[:-1]], n)
        for b, c in vec.items():
            if b in M1:
                vec_add(raw[(b, x)], {mono: sign * c})
    rows = [[ring.normal_form(JetPoly(n, R.K, raw[(b, a)])) for a in M0] for b in M1]
    return JetMatrix(rows), ring


def _matmul(A, B, zero):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), zero) for j in range(len(B[0]))]
            for i in range(len(A))]


def homotopy_transformation(F, K: int, R: TruncatedDualAlgebra | None = None,
                            R2: TruncatedDualAlgebra | None = None):
    """Data relating the family matrices of ``F.source`` and ``F.target``.

    ``F`` is an A-infinity functor between pairs which is the identity on
    letters (e.g. ``homotopy_functor``).  Returns ``(phi, Phi0, Phi1)``:
    ``phi`` substitutes the target's dual variables by jets in the source's,
    and ``Phi_d`` are the induced module automorphisms in degree ``d``.
    """
    P, P2 = F.source, F.target
    R = R or TruncatedDualAlgebra(P, K)
    R2 = R2 or TruncatedDualAlgebra(P2, K)
    n = R.ngens
    raw = [{} for _ in range(R2.ngens)]
    blocks = {d: {(y, x): {} for y in P.module_gens(d) for x in P.module_gens(d)} for d in (0, 1)}
    for w, vec in F.table.items():
        x = w[-1]
        if x in R.pos:
            if len(w) > K or not all(a in R.pos for a in w):
                continue
            sign = -1 if _binom2(len(w)) & 1 else 1
            mono = word_to_monomial([R.pos[a] for a in w], n)
            for b, c in vec.items():
                if b in R2.pos:
                    vec_add(raw[R2.pos[b]], {mono: sign * c})
        elif P.deg[x] in (0, 1) and x in P.module_gens(P.deg[x]):
            nn = len(w) - 1
            if nn > K or not all(a in R.pos for a in w[:-1]):
                continue
            sign = -1 if _binom2(nn + 1) & 1 else 1
            mono = word_to_monomial([R.pos[a] for a in w[:-1]], n)
            blk = blocks[P.deg[x]]
            for y, c in vec.items():
                if (y, x) in blk:
                    vec_add(blk[(y, x)], {mono: sign * c})
    phi = [JetPoly(n, K, t) for t in raw]

    def square(d):
        gens = P.module_gens(d)
        return JetMatrix([[JetPoly(n, K, blocks[d][(y, x)]) for x in gens] for y in gens])

    return phi, square(0), square(1)


def family_matrices_equivalent(F, K: int) -> bool:
    """Check ``phi(d') Phi_0 == Phi_1 d`` for the family matrices d, d' of source and target."""
    P, P2 = F.source, F.target
    R, R2 = TruncatedDualAlgebra(P, K), TruncatedDualAlgebra(P2, K)
    d, ring = family_matrix(P, K, R)
    d2, _ = family_matrix(P2, K, R2)
    phi, Phi0, Phi1 = homotopy_transformation(F, K, R, R2)
    zero = JetPoly(R.ngens, K)
    left = _matmul([[e.substitute(phi) for e in r] for r in d2.rows], Phi0.rows, zero)
    right = _matmul(Phi1.rows, d.rows, zero)
    return all(ring.normal_form(a) == ring.normal_form(b)
               for ra, rb in zip(left, right) for a, b in zip(ra, rb))
