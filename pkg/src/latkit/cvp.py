"""Bidirectional transformation between maximum-distance and closest-vector
instances, carried entirely in rational Gram form.

The orthonormalizing map L of the decomposed basis is irrational in
general, so the CVP side is represented by the quadratic form
(j + c)^T G' (j + c) with G' = L L^T = G^-1 rational, where G is the Gram
matrix of the v-orthogonal parts b_i' = b_i - gamma_i v. The squared
fixed-vector norm rides along so distances can be recovered without the
original instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DependentInput, DimensionCapExceeded, NotSPD
from .lattice import LatticeBasis, MDSPInstance
from .qlinalg import (
    QMatrix,
    QVector,
    ceil_minus_sqrt,
    floor_plus_sqrt,
    gram_matrix,
    inverse,
    ldl_decompose,
    sqrt_dyadic,
)


@dataclass(frozen=True)
class CVPGramInstance:
    """Closest-vector instance as a rational positive definite form."""

    gram: QMatrix
    offset: QVector
    scale_sq: Fraction

    @property
    def n(self) -> int:
        return self.gram.rows

    def objective(self, j: Sequence[int]) -> Fraction:
        """(j + offset)^T gram (j + offset), exact."""
        u = [Fraction(int(ji)) + ci for ji, ci in zip(j, self.offset.entries)]
        g = self.gram.data
        n = len(u)
        return sum(
            (u[a] * g[a][b] * u[b] for a in range(n) for b in range(n)),
            Fraction(0),
        )


@dataclass(frozen=True)
class CVPSolution:
    j: tuple[int, ...]
    objective: Fraction


@dataclass(frozen=True)
class EmbeddedCVPInstance:
    """Fixed-precision embedding with explicit row vectors.

    Rows are dyadic rational approximations of a triangular square root of
    the Gram form; their pairwise products reproduce the exact Gram matrix
    within the stated precision.
    """

    basis_rows: list[QVector]
    target: QVector
    precision_bits: int


def mdsp_to_cvp(inst: MDSPInstance) -> CVPGramInstance:
    """Forward reduction: decompose against v and invert the residual Gram."""
    v = inst.fixed
    v_sq = v.norm_sq()
    if v_sq == 0:
        raise DependentInput("fixed vector is zero")
    gamma = [b.dot(v) / v_sq for b in inst.rest.vectors]
    b_prime = [b - v.scaled(g) for b, g in zip(inst.rest.vectors, gamma)]
    g = gram_matrix(b_prime)
    return CVPGramInstance(gram=inverse(g), offset=QVector(gamma), scale_sq=v_sq)


def cvp_to_mdsp(basis_rows: QMatrix, target: QVector) -> MDSPInstance:
    """Reverse reduction from a row-basis CVP instance.

    Uses the standard orthonormal basis of R^(n+1): the fixed vector is
    e_0 and the remaining vectors are the columns of [0; L^-1] lifted by
    gamma = -(L^T)^-1 t along e_0.
    """
    n = basis_rows.rows
    if target.dim != n:
        raise ValueError("target dimension does not match the basis")
    l_inv = inverse(basis_rows)  # raises SingularMatrix
    gamma = inverse(basis_rows.transpose()).mul_vec(-target)
    e0 = QVector([1] + [0] * n)
    rest = []
    for i in range(n):
        col = l_inv.col(i)
        rest.append(QVector([gamma[i]] + list(col.entries)))
    return MDSPInstance(e0, LatticeBasis(rest, validate=False), validate=True)


def recover_mdsp_distance_sq(c: CVPGramInstance, j: Sequence[int]) -> Fraction:
    """Distance recovery: scale_sq / (1 + scale_sq * objective(j)).

    On an instance produced by mdsp_to_cvp this equals the squared distance
    of v from span(B(j)) exactly. The scale correction accounts for the
    fixed vector not being unit length.
    """
    return c.scale_sq / (1 + c.scale_sq * c.objective(j))


def _round_half_up(f: Fraction) -> int:
    return (2 * f.numerator + f.denominator) // (2 * f.denominator)


def solve_cvp_bruteforce(c: CVPGramInstance, dim_cap: int = 6) -> CVPSolution:
    """Exact minimizer of the form over all integer vectors.

    Depth-first enumeration over the exact LDL^T factorization, starting
    from the radius at the componentwise rounding of -offset. Intervals at
    each level come from exact floor/ceil of center +- sqrt(remaining
    budget / pivot), and ties go to the lexicographically smallest vector.
    """
    n = c.n
    if n > dim_cap:
        raise DimensionCapExceeded(f"dimension {n} above cap {dim_cap}")
    ldl = ldl_decompose(c.gram)
    lower = ldl.lower.data
    diag = ldl.diag
    offset = c.offset.entries

    j0 = tuple(_round_half_up(-ci) for ci in offset)
    best_j = j0
    best_obj = c.objective(j0)

    # w_k = (j_k + c_k) + sum_{m>k} lower[m][k] (j_m + c_m); objective is
    # sum_k diag[k] w_k^2, processed from the last coordinate down.
    u = [Fraction(0)] * n  # chosen j_m + c_m for m > level

    def descend(level: int, partial: Fraction, chosen: tuple[int, ...]):
        nonlocal best_j, best_obj
        budget = best_obj - partial
        if budget < 0:
            return
        center = -offset[level] - sum(
            (lower[m][level] * u[m] for m in range(level + 1, n)), Fraction(0)
        )
        q = budget / diag[level]
        lo = ceil_minus_sqrt(center, q)
        hi = floor_plus_sqrt(center, q)
        for jl in range(lo, hi + 1):
            u[level] = jl + offset[level]
            w = u[level] + sum(
                (lower[m][level] * u[m] for m in range(level + 1, n)), Fraction(0)
            )
            new_partial = partial + diag[level] * w * w
            if new_partial > best_obj:
                continue
            cand = (jl,) + chosen
            if level == 0:
                if new_partial < best_obj or (
                    new_partial == best_obj and cand < best_j
                ):
                    best_obj = new_partial
                    best_j = cand
            else:
                descend(level - 1, new_partial, cand)

    descend(n - 1, Fraction(0), ())
    return CVPSolution(best_j, best_obj)


def embed_cvp(c: CVPGramInstance, precision_bits: int) -> EmbeddedCVPInstance:
    """Fixed-precision row embedding of the Gram form.

    Rows are L * diag(sqrt(d_k)) with dyadic square roots; the row Gram
    matrix matches the exact one within 2**(8 - precision_bits) relative
    error. Perfect-square pivots embed exactly.
    """
    if precision_bits < 32:
        raise ValueError("precision_bits must be at least 32")
    ldl = ldl_decompose(c.gram)  # raises NotSPD
    n = c.n
    roots = [sqrt_dyadic(d, precision_bits + 8) for d in ldl.diag]
    rows = [
        QVector([ldl.lower.data[i][k] * roots[k] for k in range(n)])
        for i in range(n)
    ]
    target_coords = [
        -sum((rows[i][k] * c.offset[i] for i in range(n)), Fraction(0))
        for k in range(n)
    ]
    return EmbeddedCVPInstance(rows, QVector(target_coords), precision_bits)
