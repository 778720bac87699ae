"""Exact scalars, row reduction and graded vector spaces.

Everything downstream works with plain Python numbers: ``Fraction`` over the
rationals and :class:`Residue` over a prime field.  Both support ``+ - * /``,
unary minus and truthiness, so table-manipulating code never needs to know
which field it is running over.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class NotSurjective(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Residue:
    """Element of Z/p with canonical representative in 0..p-1."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise ValueError("mixing residues of different characteristic")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Residue(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero residue")
        return Residue(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.p) / self

    def __neg__(self):
        return Residue(-self.v, self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: the rationals (characteristic 0) or F_p."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {self.characteristic}")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip()
        if text in ("Q", "QQ", "rationals"):
            return cls(0)
        if text.startswith("Fp:") or text.startswith("GF:"):
            return cls(int(text.split(":", 1)[1]))
        raise ValueError(f"unknown field {text!r}; use Q or Fp:<p>")

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"Fp:{self.characteristic}"

    def __call__(self, x):
        """Coerce an int, Fraction, Residue or scalar string into this field."""
        if isinstance(x, str):
            return self.parse_scalar(x)
        p = self.characteristic
        if p == 0:
            if isinstance(x, Residue):
                raise TypeError("cannot coerce a residue into Q")
            return Fraction(x)
        if isinstance(x, Residue):
            return Residue(x.v, p)
        if isinstance(x, Fraction):
            return Residue(x.numerator, p) / x.denominator
        return Residue(int(x), p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def format_scalar(self, x) -> str:
        if self.characteristic == 0:
            x = Fraction(x)
            return f"{x.numerator}/{x.denominator}"
        return str(self(x).v)

    def parse_scalar(self, s: str):
        s = s.strip()
        if self.characteristic == 0:
            return Fraction(s)
        if "/" in s:
            num, den = s.split("/")
            return Residue(int(num), self.characteristic) / int(den)
        return Residue(int(s), self.characteristic)


QQ = FieldSpec(0)


def koszul_sign(moved_degree: int, passed_degrees: Iterable[int]) -> int:
    """Sign picked up when a symbol of ``moved_degree`` passes the others."""
    return -1 if (moved_degree * sum(passed_degrees)) % 2 else 1


# ---------------------------------------------------------------- dense linear algebra


def row_reduce(matrix: Sequence[Sequence], field: FieldSpec = QQ):
    """Reduced row-echelon form of ``matrix`` and its pivot columns.

    Returns a new list-of-lists; the input is not modified.
    """
    A = [[field(x) for x in row] for row in matrix]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(matrix, field: FieldSpec = QQ) -> int:
    return len(row_reduce(matrix, field)[1]) if matrix else 0


def kernel_basis(matrix, ncols: int, field: FieldSpec = QQ):
    """Basis of the right kernel of ``matrix`` (rows x ncols), as column-vectors."""
    if not matrix:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = row_reduce(matrix, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(matrix, rhs, field: FieldSpec = QQ):
    """One solution x of matrix @ x = rhs, or None if inconsistent."""
    n = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    R, pivots = row_reduce(aug, field)
    if n in pivots:
        return None
    x = [field.zero] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return x


def invert(matrix, field: FieldSpec = QQ):
    n = len(matrix)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(matrix)]
    R, pivots = row_reduce(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


# ---------------------------------------------------------------- sparse echelon


class Echelon:
    """Incrementally maintained reduced echelon basis of sparse vectors.

    Vectors are dicts column-key -> scalar.  The pivot of a row is its
    smallest column under ``key``; rows are kept fully reduced so that
    :meth:`reduce` is a single pass.
    """

    def __init__(self, key=None):
        self.key = key or (lambda c: c)
        self.rows: dict = {}  # pivot column -> row

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping) -> dict:
        v = {c: x for c, x in v.items() if x}
        for c in [c for c in v if c in self.rows]:
            f = v.get(c)
            if not f:
                continue
            for cc, y in self.rows[c].items():
                nv = v.get(cc, 0) - f * y
                if nv:
                    v[cc] = nv
                else:
                    v.pop(cc, None)
        return v

    def add(self, v: Mapping) -> bool:
        """Insert ``v``; return True if it was independent of the current rows."""
        v = self.reduce(v)
        if not v:
            return False
        p = min(v, key=self.key)
        inv = 1 / v[p]
        row = {c: x * inv for c, x in v.items()}
        for q, other in self.rows.items():
            f = other.get(p)
            if f:
                for cc, y in row.items():
                    nv = other.get(cc, 0) - f * y
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        self.rows[p] = row
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    @property
    def pivots(self):
        return sorted(self.rows, key=self.key)


# ---------------------------------------------------------------- graded spaces


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space given by labelled bases per degree."""

    degrees: Mapping[int, tuple] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, labels in self.degrees.items():
            labels = tuple(labels)
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate basis labels in degree {d}")
            if labels:
                clean[int(d)] = labels
        object.__setattr__(self, "degrees", dict(sorted(clean.items())))

    def __hash__(self):
        return hash(tuple(self.degrees.items()))

    def dim(self, degree=None) -> int:
        if degree is None:
            return sum(len(v) for v in self.degrees.values())
        return len(self.degrees.get(degree, ()))

    def basis(self, degree) -> tuple:
        return self.degrees.get(degree, ())

    def items(self):
        for d, labels in self.degrees.items():
            for lab in labels:
                yield d, lab

    def to_json(self) -> dict:
        return {str(d): list(labels) for d, labels in self.degrees.items()}

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedSpace":
        return cls({int(d): tuple(v) for d, v in data.items()})


@dataclass(frozen=True)
class Element:
    space: GradedSpace
    degree: int
    coefficients: Mapping[str, object]

    def __post_init__(self):
        labels = set(self.space.basis(self.degree))
        coeffs = {}
        for lab, c in self.coefficients.items():
            if lab not in labels:
                raise ValueError(f"{lab!r} is not a basis label in degree {self.degree}")
            if c:
                coeffs[lab] = c
        object.__setattr__(self, "coefficients", coeffs)

    def is_zero(self):
        return not self.coefficients


@dataclass(frozen=True)
class LinearMap:
    """Sparse graded linear map; entries are keyed by (degree, source label)."""

    source: GradedSpace
    target: GradedSpace
    shift: int
    entries: Mapping[tuple, Mapping[str, object]]
    field: FieldSpec = QQ

    def __call__(self, degree, label) -> dict:
        return dict(self.entries.get((degree, label), {}))

    def matrix(self, degree: int):
        """Matrix from source degree ``degree`` to target degree ``degree + shift``."""
        src = self.source.basis(degree)
        tgt = self.target.basis(degree + self.shift)
        z = self.field.zero
        return [[self.entries.get((degree, s), {}).get(t, z) for s in src] for t in tgt]

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self o other."""
        entries = {}
        for (d, lab), img in other.entries.items():
            out = {}
            for mid, c in img.items():
                for t, c2 in self.entries.get((d + other.shift, mid), {}).items():
                    out[t] = out.get(t, 0) + c * c2
            entries[(d, lab)] = {t: c for t, c in out.items() if c}
        return LinearMap(other.source, self.target, self.shift + other.shift, entries, self.field)

    @classmethod
    def identity(cls, space: GradedSpace, field: FieldSpec = QQ):
        one = field.one
        return cls(space, space, 0, {(d, lab): {lab: one} for d, lab in space.items()}, field)


def right_inverse(m: LinearMap) -> LinearMap:
    """Pivot-column section s with m o s = id on the target."""
    f = m.field
    entries = {}
    for tdeg, tlabels in m.target.degrees.items():
        sdeg = tdeg - m.shift
        slabels = m.source.basis(sdeg)
        M = m.matrix(sdeg)
        n = len(tlabels)
        aug = [list(row) + [f.one if i == j else f.zero for j in range(n)] for i, row in enumerate(M)]
        R, pivots = row_reduce(aug, f) if aug else ([], [])
        src_pivots = [p for p in pivots if p < len(slabels)]
        if len(src_pivots) < n:
            raise NotSurjective(f"map is not surjective onto degree {tdeg}")
        # column j of E gives the image of target basis vector j
        for j, tlab in enumerate(tlabels):
            img = {}
            for i, p in enumerate(src_pivots):
                c = R[i][len(slabels) + j]
                if c:
                    img[slabels[p]] = c
            entries[(tdeg, tlab)] = img
    return LinearMap(m.target, m.source, -m.shift, entries, f)


def vec_add(acc: dict, vec: Mapping, coef=1):
    """acc += coef * vec, dropping zeros (in place)."""
    for k, c in vec.items():
        v = acc.get(k, 0) + coef * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc
