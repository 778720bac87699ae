"""Seeded fixture generators.

Monomial path categories give minimal (associative) structures; random
sparse homotopies turn them into genuinely higher structures.
"""

from __future__ import annotations

import random

from .core import AInfPair, AInfStructure, Gen, HomotopyData
from .foundation import QQ, FieldSpec, GradedSpace


def _rand_coef(rng: random.Random, field: FieldSpec, lo=-3, hi=3):
    while True:
        c = rng.randint(lo, hi)
        if c and field(c):
            return field(c)


def monomial_category(rng: random.Random, n_objects=2, n_arrows=3, max_len=3, max_deg=3,
                      max_dim=3, arrow_degs=(0, 1, 2), field: FieldSpec = QQ, max_arity=5,
                      forbid=0.3, name="O", loops=False):
    """Path category of a random quiver modulo monomial relations (minimal, associative).

    Paths are tuples of arrows read as composites a_1 o ... o a_k.  Quadratic
    forbidden subwords, a length bound and a degree bound cut the category down.
    """
    for _attempt in range(200):
        objs = [f"{name}{i}" for i in range(n_objects)]
        arrows = []
        for a in range(n_arrows):
            s, t = rng.choice(objs), rng.choice(objs)
            arrows.append((f"a{a}", s, t, rng.choice(arrow_degs)))
        if loops:
            arrows += [(f"x{i}", o, o, 1) for i, o in enumerate(objs)]
        ar = {a[0]: a for a in arrows}
        forbidden = {(x[0], y[0]) for x in arrows for y in arrows
                     if x[1] == y[2] and rng.random() < forbid}
        if loops:
            forbidden |= {(f"x{i}", f"x{i}") for i in range(n_objects)}
        paths = [(a[0],) for a in arrows]
        frontier = list(paths)
        for _ in range(max_len - 1):
            nxt = []
            for p in frontier:
                for a in arrows:
                    if ar[p[-1]][1] == a[2] and (p[-1], a[0]) not in forbidden:
                        nxt.append(p + (a[0],))
            paths += nxt
            frontier = nxt

        def deg(p):
            return sum(ar[x][3] for x in p)

        pset = {p for p in paths if deg(p) <= max_deg}

        def bucket(p):
            return (ar[p[-1]][1], ar[p[0]][2], deg(p))

        # trim overfull hom spaces: drop a longest path with every path containing it
        while True:
            counts = {}
            for p in pset:
                counts.setdefault(bucket(p), []).append(p)
            full = [ps for ps in counts.values() if len(ps) > max_dim]
            if not full:
                break
            victim = max(full[0], key=lambda p: (len(p), p))
            k = len(victim)
            pset = {p for p in pset
                    if not any(p[i:i + k] == victim for i in range(len(p) - k + 1))}
        if not pset or (loops and any((f"x{i}",) not in pset for i in range(n_objects))):
            continue
        paths = sorted(pset, key=lambda p: (len(p), p))
        hom = {}
        for p in paths:
            key = (ar[p[-1]][1], ar[p[0]][2])
            hom.setdefault(key, {}).setdefault(deg(p), []).append(".".join(p))
        gen = {p: Gen(ar[p[-1]][1], ar[p[0]][2], deg(p), ".".join(p)) for p in paths}
        products = {}
        one = field.one
        for p in paths:
            for q in paths:
                if ar[p[-1]][1] == ar[q[0]][2] and p + q in pset:
                    products[(gen[p], gen[q])] = {gen[p + q]: one}
        return AInfStructure(objs, {k: GradedSpace({d: tuple(v) for d, v in sp.items()})
                                    for k, sp in hom.items()}, products, max_arity, field)
    raise RuntimeError("could not build a monomial category within the size limits")


def random_homotopy(S: AInfStructure, rng: random.Random, arities=(2, 3), entries=4,
                    field: FieldSpec | None = None) -> HomotopyData:
    """Sparse random homotopy components F_n for n in ``arities``."""
    field = field or S.field
    by_tgt = {}
    for i in range(len(S.gens)):
        by_tgt.setdefault(S.tgt[i], []).append(i)
    table = {}
    for n in arities:
        for _ in range(entries * 4):
            if sum(1 for w in table if len(w) == n) >= entries:
                break
            w = (rng.randrange(len(S.gens)),) if S.gens else ()
            if not w:
                break
            ok = True
            for _ in range(n - 1):
                nxt = by_tgt.get(S.src[w[-1]])
                if not nxt:
                    ok = False
                    break
                w += (rng.choice(nxt),)
            if not ok:
                continue
            d = sum(S.deg[i] for i in w) + 1 - n
            outs = [g for g in S.gens_between(S.src[w[-1]], S.tgt[w[0]], d)]
            if not outs:
                continue
            table.setdefault(w, {})[rng.choice(outs)] = _rand_coef(rng, field)
    return HomotopyData(S, table)


def corrupt(S: AInfStructure, rng: random.Random, arity=None):
    """Alter or add one product coefficient (keeping degree and composability)."""
    for _ in range(500):
        n = arity or rng.randint(2, min(3, S.max_arity))
        words = S.composable_words(n) if len(S.gens) ** n < 5000 else None
        if words is None:
            continue
        rng.shuffle(words)
        for w in words:
            d = sum(S.deg[i] for i in w) + 2 - n
            outs = S.gens_between(S.src[w[-1]], S.tgt[w[0]], d)
            if outs:
                g = rng.choice(outs)
                table = {k: dict(v) for k, v in S.table.items()}
                vec = table.setdefault(w, {})
                vec[g] = vec.get(g, 0) + _rand_coef(rng, S.field)
                if not vec[g]:
                    vec[g] = S.field(1)
                return S.with_table(table), (n, w, g)
        if arity:
            break
    return None, None


def random_dg(rng: random.Random, n_objects=2, n_arrows=3, max_dim=3, max_deg=3,
              field: FieldSpec = QQ, max_arity=5):
    """Monomial category with the inner differential m_1(a) = x a - (-1)^|a| a x.

    Each object carries a degree-1 loop x with x^2 = 0, so m_1^2 = 0 and the
    Leibniz rule holds.
    """
    for _attempt in range(200):
        S = monomial_category(rng, n_objects, n_arrows, max_dim=max_dim, max_deg=max_deg,
                              arrow_degs=(0, 1, 2), field=field, max_arity=max_arity, loops=True)
        loop = {}
        for g in S.gens:
            if g.src == g.tgt and g.label.startswith("x") and "." not in g.label:
                loop[g.src] = S.index[g]
        table = {w: dict(v) for w, v in S.table.items()}
        for a in range(len(S.gens)):
            out = {}
            for o, c in S.table.get((loop[S.tgt[a]], a), {}).items():
                out[o] = out.get(o, 0) + c
            sgn = 1 if S.deg[a] & 1 else -1
            for o, c in S.table.get((a, loop[S.src[a]]), {}).items():
                out[o] = out.get(o, 0) + sgn * c
            out = {o: c for o, c in out.items() if c}
            if out:
                table[(a,)] = out
        if any(len(w) == 1 for w in table):
            return S.with_table(table, validate=True)
    raise RuntimeError("could not build a dg category with nonzero differential")


def _random_matrix(rng, rows, cols, field):
    return [[field(rng.randint(-2, 2)) for _ in range(cols)] for _ in range(rows)]


def adapted_fixture(rng: random.Random, g=2, field: FieldSpec = QQ, max_arity=6, entries=3):
    """Objects O, P0, P1, P2 with Hom(P_i, O) in degree 0 and chain maps c_i: P_i -> P_{i+1}.

    Hom(O,O) has A_1 of dimension g and A_2 of dimension 1 with a random m_2,
    so the dual algebra has a quadratic relation.  Returns (structure, chain
    objects, chain maps) after a random perturbation mixing A_1 into the
    Hom(P_i, O) components.
    """
    from .bar import apply_homotopy
    from .deformation import AdaptedChain

    dims = {"P2": 1, "P1": 2, "P0": 1}
    u = [field(rng.choice([1, 2, -1])), field(rng.choice([1, -2, 3]))]
    B1 = [[u[0]], [u[1]]]               # V2 -> V1
    B0 = [[u[1], -u[0]]]                # V1 -> V0, B0 B1 = 0
    hom = {("O", "O"): GradedSpace({1: tuple(f"e{i}" for i in range(g)), 2: ("z",)})}
    for P, d in dims.items():
        hom[(P, "O")] = GradedSpace({0: tuple(f"v{P[1]}_{j}" for j in range(d))})
    hom[("P0", "P1")] = GradedSpace({0: ("c0",)})
    hom[("P1", "P2")] = GradedSpace({0: ("c1",)})
    E = [Gen("O", "O", 1, f"e{i}") for i in range(g)]
    z = Gen("O", "O", 2, "z")
    V = {P: [Gen(P, "O", 0, f"v{P[1]}_{j}") for j in range(d)] for P, d in dims.items()}
    c0, c1 = Gen("P0", "P1", 0, "c0"), Gen("P1", "P2", 0, "c1")
    products = {}
    for a in E:
        for b in E:
            c = field(rng.randint(-2, 2))
            if c:
                products[(a, b)] = {z: c}
    for j, v in enumerate(V["P2"]):
        products[(v, c1)] = {V["P1"][i]: B1[i][j] for i in range(2) if B1[i][j]}
    for j, v in enumerate(V["P1"]):
        products[(v, c0)] = {V["P0"][i]: B0[i][j] for i in range(1) if B0[i][j]}
    S = AInfStructure(("O", "P0", "P1", "P2"), hom, products, max_arity, field)
    # homotopy components F_2(e, v) and F_3(e, e, v) land in Hom(P, O)_0
    table = {}
    vs = [x for P in dims for x in V[P]]
    for _ in range(entries):
        v = rng.choice(vs)
        table.setdefault((S.index[rng.choice(E)], S.index[v]), {})[
            S.index[rng.choice(V[v.src])]] = _rand_coef(rng, field)
        v = rng.choice(vs)
        table.setdefault((S.index[rng.choice(E)], S.index[rng.choice(E)], S.index[v]), {})[
            S.index[rng.choice(V[v.src])]] = _rand_coef(rng, field)
    S = apply_homotopy(S, HomotopyData(S, table))
    chain = AdaptedChain(["P2", "P1", "P0"], [{S.index[c1]: field.one}, {S.index[c0]: field.one}], "O")
    return S, chain


def product_free_pair(rng: random.Random, g=6, h0=2, h1=3, field: FieldSpec = QQ, max_arity=5,
                      surjective=True):
    """Pair with A = A_1 (dim g), M = M_0 + M_1 and only m_2: A_1 x M_0 -> M_1 (the pairing)."""
    A = tuple(f"e{i}" for i in range(g))
    hom = {(AInfPair.Y, AInfPair.Y): GradedSpace({1: A}),
           (AInfPair.X, AInfPair.Y): GradedSpace({0: tuple(f"p{i}" for i in range(h0)),
                                                  1: tuple(f"q{i}" for i in range(h1))})}
    from .foundation import rank
    for _ in range(100):
        sig = _random_matrix(rng, h0 * h1, g, field)
        if not surjective or rank(sig, field) == min(h0 * h1, g):
            break
    products = {}
    Y, X = AInfPair.Y, AInfPair.X
    for k in range(g):
        for a in range(h0):
            out = {Gen(X, Y, 1, f"q{b}"): sig[b * h0 + a][k] for b in range(h1) if sig[b * h0 + a][k]}
            if out:
                products[(Gen(Y, Y, 1, A[k]), Gen(X, Y, 0, f"p{a}"))] = out
    return AInfPair(hom, products, max_arity, field)


def pair_homotopy(rng: random.Random, P: AInfPair, entries=4, arities=(2, 3)) -> HomotopyData:
    """Random homotopy with algebra and module components on a pair."""
    A1 = P.algebra_gens(1)
    table = {}
    for n in arities:
        for _ in range(entries):
            w = tuple(rng.choice(A1) for _ in range(n))
            table.setdefault(w, {})[rng.choice(A1)] = _rand_coef(rng, P.field)
            for d in (0, 1):
                mods = P.module_gens(d)
                if mods:
                    w = tuple(rng.choice(A1) for _ in range(n - 1)) + (rng.choice(mods),)
                    table.setdefault(w, {})[rng.choice(mods)] = _rand_coef(rng, P.field)
    return HomotopyData(P, table)


def perturbed_pair(rng: random.Random, P: AInfPair, entries=4, arities=(2, 3)):
    """Apply a random pair homotopy to a minimal pair."""
    from .bar import apply_homotopy
    return apply_homotopy(P, pair_homotopy(rng, P, entries, arities))


def kill_target_fixture(seed: int, g=6, h0=2, h1=3, N=5, field: FieldSpec = QQ):
    rng = random.Random(seed)
    return perturbed_pair(rng, product_free_pair(rng, g, h0, h1, field, N))


def _invertible(rng, n, field):
    from .foundation import rank
    while True:
        M = _random_matrix(rng, n, n, field)
        if rank(M, field) == n:
            return M


def random_basis_change(S: AInfStructure, rng: random.Random):
    """(T, F): S rewritten in a random basis of each hom space and degree, and the strict
    functor F : S -> T with F_1 the change of basis."""
    from .foundation import invert
    from .core import AInfFunctor
    field = S.field
    blocks = {}
    for i, g in enumerate(S.gens):
        blocks.setdefault((g.src, g.tgt, g.deg), []).append(i)
    P, Pinv = {}, {}
    for idx in blocks.values():
        M = _invertible(rng, len(idx), field)
        Minv = invert(M, field)
        for a, i in enumerate(idx):
            P[i] = {j: M[b][a] for b, j in enumerate(idx) if M[b][a]}
            Pinv[i] = {j: Minv[b][a] for b, j in enumerate(idx) if Minv[b][a]}

    def push(vec, mat):
        out = {}
        for i, c in vec.items():
            for j, x in mat[i].items():
                out[j] = out.get(j, 0) + c * x
        return {j: c for j, c in out.items() if c}

    # m'(u) = P m(P^-1 u_1, ..., P^-1 u_n): the words u meeting w come from the transpose of P^-1
    back = {}
    for u, img in Pinv.items():
        for w, c in img.items():
            back.setdefault(w, {})[u] = c
    table = {}
    for w, vec in S.table.items():
        out = push(vec, P)
        for u, c in _expand_word(w, back):
            acc = table.setdefault(u, {})
            for j, x in out.items():
                acc[j] = acc.get(j, 0) + c * x
    table = {w: {j: c for j, c in v.items() if c} for w, v in table.items()}
    table = {w: v for w, v in table.items() if v}
    T = S.with_table(table, validate=True)
    F = AInfFunctor(S, T, {(i,): P[i] for i in range(len(S.gens)) if P[i]})
    return T, F


def _expand_word(w, P):
    """(P (x) ... (x) P)(w) as a list of (word, coefficient)."""
    terms = [((), 1)]
    for a in w:
        terms = [(u + (j,), c * x) for u, c in terms for j, x in P[a].items()]
    return terms
