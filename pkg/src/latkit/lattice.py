"""Lattice bases, maximum-distance instances, and certificate utilities.

An MDSP instance is a full basis of an (n+1)-dimensional lattice split into
a distinguished fixed vector v and the n remaining vectors B. Candidate
sub-lattice bases have the shift form B(x) = {b_i + x_i v} for integer x,
and a decision certificate is exactly such an integer tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DependentInput,
    LengthMismatch,
    NonSquare,
)
from .qlinalg import (
    QMatrix,
    QVector,
    determinant,
    dist_sq_to_span,
    gram_schmidt,
    inverse,
    iroot_ceil,
    iroot_floor,
    is_unimodular,
    rational,
)

ShiftVector = tuple[int, ...]


class LatticeBasis:
    """An ordered, linearly independent family of rational vectors."""

    __slots__ = ("vectors", "dim")

    def __init__(self, vectors: Sequence[QVector], *, validate: bool = True):
        vecs = tuple(vectors)
        if not vecs:
            raise LengthMismatch("a basis needs at least one vector")
        dim = vecs[0].dim
        if any(v.dim != dim for v in vecs):
            raise LengthMismatch("basis vectors have differing dimensions")
        if len(vecs) > dim:
            raise DependentInput("more vectors than the ambient dimension")
        if validate:
            gram_schmidt(vecs)  # raises DependentInput on dependence
        self.vectors = vecs
        self.dim = dim

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i: int) -> QVector:
        return self.vectors[i]

    @property
    def is_full_rank(self) -> bool:
        return len(self.vectors) == self.dim

    def matrix(self) -> QMatrix:
        """Matrix whose columns are the basis vectors."""
        return QMatrix.from_columns(self.vectors)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LatticeBasis) and self.vectors == other.vectors

    def __repr__(self) -> str:
        return f"LatticeBasis({list(self.vectors)!r})"


class MDSPInstance:
    """A fixed vector v together with the n remaining basis vectors.

    Together they form a basis of an (n+1)-dimensional lattice. Usually the
    ambient dimension is also n+1, but the family may sit inside a larger
    space (the accelerated reduction builds such prefixes); operations that
    need a square matrix require is_full_dimensional.
    """

    __slots__ = ("fixed", "rest")

    def __init__(self, fixed: QVector, rest: LatticeBasis, *, validate: bool = True):
        if fixed.dim != rest.dim:
            raise LengthMismatch("fixed vector and basis live in different spaces")
        if len(rest) + 1 > fixed.dim:
            raise LengthMismatch(
                f"{len(rest) + 1} vectors cannot be independent in dimension {fixed.dim}"
            )
        if validate:
            gram_schmidt((fixed,) + rest.vectors)  # raises DependentInput
        self.fixed = fixed
        self.rest = rest

    @classmethod
    def from_vectors(cls, fixed, rest_vectors, *, validate: bool = True) -> "MDSPInstance":
        fixed_v = fixed if isinstance(fixed, QVector) else QVector(fixed)
        rest_vs = [v if isinstance(v, QVector) else QVector(v) for v in rest_vectors]
        return cls(fixed_v, LatticeBasis(rest_vs, validate=False), validate=validate)

    @property
    def n(self) -> int:
        return len(self.rest)

    @property
    def is_full_dimensional(self) -> bool:
        return len(self.rest) + 1 == self.fixed.dim

    def full_matrix(self) -> QMatrix:
        """Columns [v | b_1 ... b_n]; square iff the instance is full dimensional."""
        return QMatrix.from_columns((self.fixed,) + self.rest.vectors)

    def __repr__(self) -> str:
        return f"MDSPInstance(fixed={self.fixed!r}, rest={self.rest!r})"


@dataclass(frozen=True)
class EquivalenceWitness:
    """Unimodular change of basis u with second = first . u."""

    u: QMatrix


@dataclass(frozen=True)
class DMDSPQuery:
    """Decision query: does some shift reach dist^2 >= gamma^2 |v|^2.

    The threshold is carried squared so the comparison stays rational.
    """

    instance: MDSPInstance
    gamma_sq: Fraction

    def __post_init__(self):
        if not (0 < self.gamma_sq <= 1):
            raise ValueError("gamma_sq must lie in (0, 1]")

    @classmethod
    def from_gamma(cls, instance: MDSPInstance, gamma) -> "DMDSPQuery":
        g = rational(gamma)
        if not (0 < g <= 1):
            raise ValueError("gamma must lie in (0, 1]")
        return cls(instance, g * g)


@dataclass(frozen=True)
class CertificateBounds:
    """Size bounds certifying that decision certificates stay polynomial.

    k0 is the product of the denominators of the fixed vector's entries,
    dk are the squared relative volumes of the basis prefixes, bigD their
    product, bigE = bigD^2 * (product of squared orthogonal lengths), and
    per_coordinate_bound[i] stores the squared form
    bigE^2 * k0^8 * |v|^2 * |b_i|^2 bounding each certificate coordinate.
    input_bit_size_l totals the bit lengths of every numerator and
    denominator in the instance.
    """

    k0: int
    dk: list[Fraction]
    bigD: Fraction
    bigE: Fraction
    per_coordinate_bound: list[Fraction]
    input_bit_size_l: int


def apply_shift(inst: MDSPInstance, x: Sequence[int]) -> LatticeBasis:
    """Basis B(x) = {b_i + x_i v}; spans the same lattice as [v|B] with v."""
    if len(x) != inst.n:
        raise LengthMismatch(f"shift vector has length {len(x)}, expected {inst.n}")
    v = inst.fixed
    shifted = [b + v.scaled(int(xi)) for b, xi in zip(inst.rest.vectors, x)]
    return LatticeBasis(shifted, validate=False)


def same_lattice(a: QMatrix, b: QMatrix) -> tuple[bool, Optional[EquivalenceWitness]]:
    """Do the columns of a and b generate the same lattice.

    Computes u = a^-1 b and reports it as a witness iff it is unimodular.
    """
    if not a.is_square or not b.is_square:
        raise NonSquare("lattice equivalence needs square bases")
    if a.rows != b.rows:
        raise LengthMismatch("bases have different dimensions")
    u = inverse(a) @ b
    if is_unimodular(u):
        return True, EquivalenceWitness(u)
    return False, None


def verify_dmdsp_certificate(q: DMDSPQuery, x: Sequence[int]) -> bool:
    """Check a shift-vector certificate against a decision query.

    Accepts iff [v|B(x)] spans the same lattice as [v|B] (always true for
    genuine shift vectors, still verified) and the squared distance from v
    to span(B(x)) is at least gamma_sq * |v|^2.
    """
    inst = q.instance
    shifted = apply_shift(inst, x)
    ok, _ = same_lattice(
        inst.full_matrix(), QMatrix.from_columns((inst.fixed,) + shifted.vectors)
    )
    if not ok:
        return False
    d_sq = dist_sq_to_span(inst.fixed, shifted.vectors)
    return d_sq >= q.gamma_sq * inst.fixed.norm_sq()


def _bit_size(f: Fraction) -> int:
    return max(1, abs(f.numerator).bit_length()) + f.denominator.bit_length()


def certificate_bounds(inst: MDSPInstance) -> CertificateBounds:
    """Exact certificate size quantities for an instance."""
    v = inst.fixed
    k0 = 1
    for e in v.entries:
        k0 *= e.denominator
    gs = gram_schmidt(inst.rest.vectors)
    dk = list(gs.dk)
    big_d = Fraction(1)
    for d in dk:
        big_d *= d
    big_e = big_d * big_d * dk[-1]
    v_sq = v.norm_sq()
    k0_8 = Fraction(k0) ** 8
    per_coord = [
        big_e * big_e * k0_8 * v_sq * b.norm_sq() for b in inst.rest.vectors
    ]
    l_bits = sum(_bit_size(e) for e in v.entries) + sum(
        _bit_size(e) for b in inst.rest.vectors for e in b.entries
    )
    return CertificateBounds(
        k0=k0,
        dk=dk,
        bigD=big_d,
        bigE=big_e,
        per_coordinate_bound=per_coord,
        input_bit_size_l=l_bits,
    )


def minkowski_bound_sq(basis: LatticeBasis, frac_bits: int = 64) -> Fraction:
    """Certified upper bound on the squared length of a shortest vector.

    Returns n * |det|^(2/n) exactly when that power is rational, otherwise
    a rational upper enclosure tight to about 2**-frac_bits, obtained from
    integer root ceilings of the scaled numerator and denominator.
    """
    if not basis.is_full_rank:
        raise NonSquare("Minkowski bound needs a full-rank square basis")
    n = basis.dim
    det_sq = determinant(basis.matrix()) ** 2
    p, q = det_sq.numerator, det_sq.denominator
    rp = iroot_floor(p, n)
    rq = iroot_floor(q, n)
    if rp ** n == p and rq ** n == q:
        return n * Fraction(rp, rq)
    shift = 1 << (n * frac_bits)
    num_up = iroot_ceil(p * shift, n)
    den_down = iroot_floor(q * shift, n)
    return n * Fraction(num_up, den_down)
