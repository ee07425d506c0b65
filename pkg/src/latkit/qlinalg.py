"""Exact rational vectors, matrices, and orthogonalization primitives.

Everything here is computed over arbitrary-precision rationals
(``fractions.Fraction``), so all comparisons and postconditions are exact.
No floating point enters any correctness-bearing path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

from .errors import DependentInput, LengthMismatch, NonSquare, NotSPD, SingularMatrix

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


def rational(x: RationalLike) -> Fraction:
    """Coerce ints, 'p/q' strings, or Fractions to a canonical Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class QVector:
    """Immutable vector of rationals."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[RationalLike]):
        self.entries: tuple[Fraction, ...] = tuple(rational(e) for e in entries)
        if not self.entries:
            raise LengthMismatch("vector must have positive dimension")

    @classmethod
    def zero(cls, dim: int) -> "QVector":
        return cls([_ZERO] * dim)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def __add__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "QVector":
        return QVector(-a for a in self.entries)

    def scaled(self, c: RationalLike) -> "QVector":
        c = rational(c)
        return QVector(c * a for a in self.entries)

    def dot(self, other: "QVector") -> Fraction:
        self._check_dim(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), _ZERO)

    def norm_sq(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def _check_dim(self, other: "QVector") -> None:
        if len(self.entries) != len(other.entries):
            raise LengthMismatch(
                f"dimension mismatch: {len(self.entries)} vs {len(other.entries)}"
            )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QVector) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"QVector({list(self.entries)!r})"


class QMatrix:
    """Immutable rectangular matrix of rationals, row-major."""

    __slots__ = ("data",)

    def __init__(self, rows: Iterable[Iterable[RationalLike]]):
        self.data: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(rational(e) for e in row) for row in rows
        )
        if not self.data or not self.data[0]:
            raise LengthMismatch("matrix must have positive dimensions")
        width = len(self.data[0])
        if any(len(row) != width for row in self.data):
            raise LengthMismatch("ragged rows in matrix")

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[QVector]) -> "QMatrix":
        if not cols:
            raise LengthMismatch("need at least one column")
        dim = cols[0].dim
        if any(c.dim != dim for c in cols):
            raise LengthMismatch("column dimensions differ")
        return cls([[c[i] for c in cols] for i in range(dim)])

    @classmethod
    def from_rows(cls, rows: Sequence[QVector]) -> "QMatrix":
        return cls([list(r) for r in rows])

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> QVector:
        return QVector(self.data[i])

    def col(self, j: int) -> QVector:
        return QVector(r[j] for r in self.data)

    def row_vectors(self) -> list[QVector]:
        return [QVector(r) for r in self.data]

    def col_vectors(self) -> list[QVector]:
        return [self.col(j) for j in range(self.cols)]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.data[i][j]

    def transpose(self) -> "QMatrix":
        return QMatrix(zip(*self.data))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise LengthMismatch("inner dimensions do not match")
        ot = list(zip(*other.data))
        return QMatrix(
            [
                [sum((a * b for a, b in zip(row, col)), _ZERO) for col in ot]
                for row in self.data
            ]
        )

    def mul_vec(self, v: QVector) -> QVector:
        if self.cols != v.dim:
            raise LengthMismatch("matrix-vector dimension mismatch")
        return QVector(
            sum((a * b for a, b in zip(row, v.entries)), _ZERO) for row in self.data
        )

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for row in self.data for e in row)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QMatrix) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __repr__(self) -> str:
        return f"QMatrix({[list(r) for r in self.data]!r})"


@dataclass(frozen=True)
class GramSchmidtResult:
    """Orthogonalization of a basis.

    ``bstar`` are pairwise orthogonal, ``mu`` is unit lower triangular with
    the projection coefficients below the diagonal, and ``dk[k]`` is the
    squared relative volume of the first k+1 input vectors, i.e. the running
    product of the squared lengths of the orthogonal vectors.
    """

    bstar: list[QVector]
    mu: QMatrix
    dk: list[Fraction]


@dataclass(frozen=True)
class LDLDecomposition:
    """Exact factorization g = lower * diag * lower^T of an SPD matrix."""

    lower: QMatrix
    diag: list[Fraction]


def gram_schmidt(basis: Sequence[QVector]) -> GramSchmidtResult:
    """Orthogonalize a linearly independent basis, exactly.

    Raises DependentInput as soon as some orthogonal component vanishes.
    """
    if not basis:
        raise LengthMismatch("gram_schmidt requires a nonempty basis")
    dim = basis[0].dim
    if any(b.dim != dim for b in basis):
        raise LengthMismatch("basis vectors have differing dimensions")
    n = len(basis)
    bstar: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    for i, b in enumerate(basis):
        w = list(b.entries)
        for j in range(i):
            m = sum((x * y for x, y in zip(b.entries, bstar[j])), _ZERO) / norms[j]
            mu[i][j] = m
            bj = bstar[j]
            for k in range(dim):
                w[k] -= m * bj[k]
        nsq = sum((x * x for x in w), _ZERO)
        if nsq == 0:
            raise DependentInput(f"vector {i} is in the span of its predecessors")
        bstar.append(w)
        norms.append(nsq)
    dk: list[Fraction] = []
    acc = _ONE
    for nsq in norms:
        acc *= nsq
        dk.append(acc)
    return GramSchmidtResult([QVector(w) for w in bstar], QMatrix(mu), dk)


def project_onto_span(v: QVector, basis: Sequence[QVector]) -> QVector:
    """Orthogonal projection of v onto span(basis); empty span maps to 0."""
    if not basis:
        return QVector.zero(v.dim)
    gs = gram_schmidt(basis)
    proj = QVector.zero(v.dim)
    for w in gs.bstar:
        proj = proj + w.scaled(v.dot(w) / w.norm_sq())
    return proj


def dist_sq_to_span(v: QVector, basis: Sequence[QVector]) -> Fraction:
    """Squared distance from v to span(basis), an exact rational."""
    r = v - project_onto_span(v, basis)
    return r.norm_sq()


def gram_matrix(vectors: Sequence[QVector]) -> QMatrix:
    """Matrix of pairwise inner products."""
    if not vectors:
        raise LengthMismatch("gram_matrix requires at least one vector")
    return QMatrix([[a.dot(b) for b in vectors] for a in vectors])


def rel_volume_sq(basis: Sequence[QVector]) -> Fraction:
    """Squared relative volume det(B^T B) of an independent family.

    Computed by fraction-free elimination on the Gram matrix; the empty
    family has volume 1 by convention.
    """
    if not basis:
        return _ONE
    g = [[a.dot(b) for b in basis] for a in basis]
    vol = _det_rows(g)
    if vol == 0:
        raise DependentInput("vectors are linearly dependent")
    return vol


def _det_rows(rows: list[list[Fraction]]) -> Fraction:
    """Bareiss-style fraction-free elimination determinant."""
    a = [row[:] for row in rows]
    n = len(a)
    sign = 1
    prev = _ONE
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return _ZERO
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            rowi = a[i]
            rowk = a[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pivot - aik * rowk[j]) / prev
            rowi[k] = _ZERO
        prev = pivot
    return a[-1][-1] if sign == 1 else -a[-1][-1]


def determinant(m: QMatrix) -> Fraction:
    if not m.is_square:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    return _det_rows([list(r) for r in m.data])


def inverse(m: QMatrix) -> QMatrix:
    """Exact inverse by Gauss-Jordan elimination."""
    if not m.is_square:
        raise NonSquare(f"inverse of a {m.rows}x{m.cols} matrix")
    n = m.rows
    a = [list(row) + [_ONE if i == j else _ZERO for j in range(n)]
         for i, row in enumerate(m.data)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv_p = _ONE / a[k][k]
        a[k] = [e * inv_p for e in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [e - f * p for e, p in zip(a[i], a[k])]
    return QMatrix([row[n:] for row in a])


def is_unimodular(m: QMatrix) -> bool:
    """True iff m is integral with determinant +1 or -1."""
    if not m.is_square:
        raise NonSquare("unimodularity is defined for square matrices")
    if not m.is_integral():
        return False
    d = determinant(m)
    return d == 1 or d == -1


def ldl_decompose(g: QMatrix) -> LDLDecomposition:
    """Exact L D L^T factorization of a symmetric positive definite matrix."""
    if not g.is_square:
        raise NonSquare("LDL factorization needs a square matrix")
    n = g.rows
    if any(g.data[i][j] != g.data[j][i] for i in range(n) for j in range(i)):
        raise NotSPD("matrix is not symmetric")
    lower = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    diag: list[Fraction] = []
    for j in range(n):
        dj = g.data[j][j] - sum(
            (lower[j][k] * lower[j][k] * diag[k] for k in range(j)), _ZERO
        )
        if dj <= 0:
            raise NotSPD(f"pivot {j} is not positive")
        diag.append(dj)
        for i in range(j + 1, n):
            s = g.data[i][j] - sum(
                (lower[i][k] * lower[j][k] * diag[k] for k in range(j)), _ZERO
            )
            lower[i][j] = s / dj
    return LDLDecomposition(QMatrix(lower), diag)


# -- integer and rational root helpers ------------------------------------
#
# These keep irrational quantities (square roots of rationals) out of the
# decision paths: callers compare against exact predicates or use certified
# one-sided enclosures.


def iroot_floor(x: int, n: int) -> int:
    """Largest r with r**n <= x, for x >= 0, n >= 1."""
    if x < 0:
        raise ValueError("negative radicand")
    if n < 1:
        raise ValueError("root order must be positive")
    if x == 0:
        return 0
    if n == 1:
        return x
    if n == 2:
        return isqrt(x)
    r = 1 << -(-x.bit_length() // n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def iroot_ceil(x: int, n: int) -> int:
    r = iroot_floor(x, n)
    return r if r ** n == x else r + 1


def floor_plus_sqrt(r: Fraction, q: Fraction) -> int:
    """Exact floor of r + sqrt(q) for rationals r and q >= 0."""
    if q < 0:
        raise ValueError("negative radicand")

    def le(m: int) -> bool:
        d = m - r
        return d <= 0 or d * d <= q

    m = (r.numerator // r.denominator) + isqrt(q.numerator // q.denominator)
    while le(m + 1):
        m += 1
    while not le(m):
        m -= 1
    return m


def floor_minus_sqrt(r: Fraction, q: Fraction) -> int:
    """Exact floor of r - sqrt(q) for rationals r and q >= 0."""
    if q < 0:
        raise ValueError("negative radicand")

    def le(m: int) -> bool:
        d = r - m
        return d >= 0 and q <= d * d

    m = (r.numerator // r.denominator) - isqrt(q.numerator // q.denominator) - 1
    while le(m + 1):
        m += 1
    while not le(m):
        m -= 1
    return m


def ceil_plus_sqrt(r: Fraction, q: Fraction) -> int:
    """Exact ceiling of r + sqrt(q)."""
    return -floor_minus_sqrt(-r, q)


def ceil_minus_sqrt(r: Fraction, q: Fraction) -> int:
    """Exact ceiling of r - sqrt(q)."""
    return -floor_plus_sqrt(-r, q)


def sqrt_dyadic(x: Fraction, rel_bits: int) -> Fraction:
    """Dyadic lower approximation of sqrt(x), relative error below 2**-rel_bits."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return _ZERO
    k = rel_bits + 4
    while True:
        m = (x.numerator << (2 * k)) // x.denominator
        s = isqrt(m)
        if s >> (rel_bits + 2):
            return Fraction(s, 1 << k)
        k += rel_bits + 4
