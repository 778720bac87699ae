"""Truncated commutative power series, matrices over them, minors and
coordinate straightening."""

from __future__ import annotations

from itertools import combinations

from .foundation import QQ, Echelon, FieldSpec, invert


class RingMismatch(ValueError):
    pass


class SizeTooLarge(ValueError):
    pass


class DependentLinearParts(ValueError):
    pass


def monomials(nvars: int, max_deg: int, min_deg: int = 0):
    """Exponent vectors of total degree in [min_deg, max_deg], graded then lexicographic."""
    out = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, k + 1)

    for d in range(max(min_deg, 0), max_deg + 1):
        if nvars == 0:
            if d == 0:
                out.append(())
            continue
        rec([], d, 0)
    return out


def mono_key(m):
    return (sum(m), tuple(-e for e in m))


class JetPoly:
    """Polynomial in ``nvars`` variables modulo monomials of degree > K."""

    __slots__ = ("nvars", "K", "terms")

    def __init__(self, nvars: int, K: int, terms=None):
        self.nvars = nvars
        self.K = K
        self.terms = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != nvars:
                raise RingMismatch("exponent vector of the wrong length")
            if c and sum(m) <= K:
                self.terms[m] = self.terms.get(m, 0) + c
        self.terms = {m: c for m, c in self.terms.items() if c}

    # construction
    @classmethod
    def var(cls, nvars, K, i, coef=1):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, K, {tuple(e): coef})

    @classmethod
    def const(cls, nvars, K, c):
        return cls(nvars, K, {(0,) * nvars: c})

    def _like(self, terms):
        p = JetPoly.__new__(JetPoly)
        p.nvars, p.K, p.terms = self.nvars, self.K, terms
        return p

    def _check(self, other):
        if not isinstance(other, JetPoly) or other.nvars != self.nvars or other.K != self.K:
            raise RingMismatch("jets live in different rings")

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, JetPoly):
            other = JetPoly.const(self.nvars, self.K, other)
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, JetPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, JetPoly):
            if not other:
                return self._like({})
            return self._like({m: c * other for m, c in self.terms.items()})
        self._check(other)
        t = {}
        K = self.K
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.terms.items():
                if d1 + sum(m2) > K:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return self._like(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, JetPoly):
            return self.nvars == other.nvars and self.K == other.K and self.terms == other.terms
        return self.terms == ({(0,) * self.nvars: other} if other else {})

    def __hash__(self):
        return hash((self.nvars, self.K, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=mono_key):
            mono = "*".join(f"t{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            parts.append(f"{self.terms[m]}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # structure
    def homogeneous(self, d) -> "JetPoly":
        return self._like({m: c for m, c in self.terms.items() if sum(m) == d})

    def linear_vector(self, field: FieldSpec = QQ) -> list:
        v = [field.zero] * self.nvars
        for m, c in self.terms.items():
            if sum(m) == 1:
                v[m.index(1)] = field(c)
        return v

    def order(self):
        return min((sum(m) for m in self.terms), default=None)

    def max_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def truncate(self, K) -> "JetPoly":
        return JetPoly(self.nvars, K, {m: c for m, c in self.terms.items() if sum(m) <= K})

    def substitute(self, images) -> "JetPoly":
        """self(images[0], ..., images[n-1]); images are JetPolys in a common ring."""
        if len(images) != self.nvars:
            raise RingMismatch("need one image per variable")
        ring = images[0] if images else None
        out = JetPoly(ring.nvars, ring.K) if ring is not None else JetPoly(0, self.K)
        powers = [{0: JetPoly.const(ring.nvars, ring.K, 1)} for _ in images]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = pw(i, e - 1) * images[i]
            return cache[e]

        for m, c in self.terms.items():
            term = JetPoly.const(ring.nvars, ring.K, c)
            for i, e in enumerate(m):
                if e:
                    term = term * pw(i, e)
                    if not term:
                        break
            out = out + term
        return out


class JetMatrix:
    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        self.rows = rows
        p = rows[0][0]
        self.nvars, self.K = p.nvars, p.K
        for r in rows:
            if len(r) != len(rows[0]):
                raise ValueError("ragged matrix")
            for e in r:
                if e.nvars != self.nvars or e.K != self.K:
                    raise RingMismatch("matrix entries from different rings")

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def entries(self):
        return [e for r in self.rows for e in r]

    def map(self, fn) -> "JetMatrix":
        return JetMatrix([[fn(e) for e in r] for r in self.rows])

    def __eq__(self, other):
        return isinstance(other, JetMatrix) and self.rows == other.rows


def det(rows) -> JetPoly:
    """Laplace expansion along the first row."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        if not rows[0][j]:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * det(sub)
        if j & 1:
            term = -term
        total = term if total is None else total + term
    if total is None:
        p = rows[0][0]
        return JetPoly(p.nvars, p.K)
    return total


class JetIdeal:
    def __init__(self, nvars: int, K: int, generators):
        self.nvars, self.K = nvars, K
        gens = []
        for g in generators:
            if g.nvars != nvars or g.K != K:
                raise RingMismatch("generator from a different ring")
            if g:
                gens.append(g)
        self.generators = gens
        self._ech = None

    def realized(self) -> Echelon:
        """Echelon basis of the span of monomial * generator within degree <= K."""
        if self._ech is None:
            ech = Echelon(key=mono_key)
            for g in self.generators:
                o = g.order()
                for m in monomials(self.nvars, self.K - o):
                    prod = {}
                    for mm, c in g.terms.items():
                        e = tuple(a + b for a, b in zip(m, mm))
                        if sum(e) <= self.K:
                            prod[e] = c
                    if prod:
                        ech.add(prod)
            self._ech = ech
        return self._ech

    def contains(self, p: JetPoly) -> bool:
        return self.realized().contains(p.terms)

    def dims(self) -> list:
        """Dimension of the realized subspace in each degree 0..K."""
        out = [0] * (self.K + 1)
        for piv in self.realized().rows:
            out[sum(piv)] += 1
        return out


def minors(Mt: JetMatrix, s: int) -> JetIdeal:
    r, c = Mt.shape
    if s < 1 or s > min(r, c):
        raise SizeTooLarge(f"minor size {s} does not fit a {r}x{c} matrix")
    gens = []
    for rows in combinations(range(r), s):
        for cols in combinations(range(c), s):
            gens.append(det([[Mt.rows[i][j] for j in cols] for i in rows]))
    return JetIdeal(Mt.nvars, Mt.K, gens)


def ideal_jet_equal(I: JetIdeal, J: JetIdeal, K: int | None = None) -> bool:
    if I.nvars != J.nvars or I.K != J.K or (K is not None and K != I.K):
        raise RingMismatch("ideals live in different jet rings")
    return all(I.contains(g) for g in J.generators) and all(J.contains(g) for g in I.generators)


def _linear_echelon(vectors):
    ech = Echelon()
    pivots = []
    for v in vectors:
        red = ech.reduce({i: x for i, x in enumerate(v) if x})
        if not red:
            return None
        pivots.append(min(red))
        ech.add(red)
    return pivots


def linear_independence(Mt: JetMatrix, field: FieldSpec = QQ) -> bool:
    return _linear_echelon([e.linear_vector(field) for e in Mt.entries()]) is not None


class JetAutomorphism:
    """Substitution t_i -> images[i]."""

    def __init__(self, images):
        self.images = list(images)
        self.nvars = len(self.images)
        self.K = self.images[0].K if self.images else 0

    @classmethod
    def identity(cls, nvars, K):
        return cls([JetPoly.var(nvars, K, i) for i in range(nvars)])

    def __call__(self, p: JetPoly) -> JetPoly:
        return p.substitute(self.images)

    def compose(self, other: "JetAutomorphism") -> "JetAutomorphism":
        """(self o other)(p) = self(other(p)): t_i -> other_i(self)."""
        return JetAutomorphism([g.substitute(self.images) for g in other.images])

    def linear_matrix(self, field: FieldSpec = QQ):
        return [img.linear_vector(field) for img in self.images]

    def inverse(self, field: FieldSpec = QQ) -> "JetAutomorphism":
        n, K = self.nvars, self.K
        L = self.linear_matrix(field)
        Linv = invert(L, field)
        t = [JetPoly.var(n, K, i) for i in range(n)]
        nonlin = [img - _lin(L[i], n, K) for i, img in enumerate(self.images)]
        # psi(phi) = t with psi = L + N  =>  phi = L^{-1}(t - N(phi)), iterate degree by degree
        phi = [_combo(Linv[i], t) for i in range(n)]
        for _ in range(K):
            rhs = [t[i] - nonlin[i].substitute(phi) for i in range(n)]
            phi = [_combo(Linv[i], rhs) for i in range(n)]
        # phi is a right inverse of psi as substitution: psi_i(phi) = t_i
        return JetAutomorphism(phi)

    def __eq__(self, other):
        return isinstance(other, JetAutomorphism) and self.images == other.images


def _lin(row, n, K):
    return JetPoly(n, K, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(row) if c})


def _combo(coefs, polys):
    out = JetPoly(polys[0].nvars, polys[0].K)
    for c, p in zip(coefs, polys):
        if c:
            out = out + p * c
    return out


def straighten(Mt: JetMatrix, field: FieldSpec = QQ):
    """Return (phi, straightened matrix, assignment) with phi(entry_j) = t_{c(j)}."""
    entries = Mt.entries()
    if len(entries) > Mt.nvars:
        raise DependentLinearParts("more entries than variables")
    pivots = _linear_echelon([e.linear_vector(field) for e in entries])
    if pivots is None:
        raise DependentLinearParts("linear parts of the entries are dependent")
    n, K = Mt.nvars, Mt.K
    psi = [JetPoly.var(n, K, i) for i in range(n)]
    for e, c in zip(entries, pivots):
        psi[c] = e
    phi = JetAutomorphism(psi).inverse(field)
    straight = Mt.map(phi)
    return phi, straight, pivots


def coordinate_matrix(shape, assignment, nvars, K) -> JetMatrix:
    r, c = shape
    it = iter(assignment)
    return JetMatrix([[JetPoly.var(nvars, K, next(it)) for _ in range(c)] for _ in range(r)])
