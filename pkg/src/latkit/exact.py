"""Exact maximum-distance solver: certified shift ranges plus enumeration.

Any basis B(x) whose span is at least as far from v as span(B) must keep
every single-line projection of v below p = |proj(v, span(B))|. Solving
that condition per coordinate yields an integer interval [s_i, t_i], and
the optimum is found by exhaustive search over the Cartesian product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Literal, Sequence

from .errors import DegenerateFixedVector
from .lattice import LatticeBasis, MDSPInstance, apply_shift
from .qlinalg import (
    _det_rows,
    ceil_plus_sqrt,
    dist_sq_to_span,
    floor_minus_sqrt,
    project_onto_span,
)


@dataclass(frozen=True)
class ShiftRanges:
    """Per-coordinate integer ranges certified to contain the optimum.

    alpha[i] is the line-projection center v.b_i / |v|^2; beta_sq_bound[i]
    is a certified rational upper bound on the squared half-width of the
    admissible real interval around -alpha[i]. Integers outside [s_i, t_i]
    force the line projection of v on b_i + x_i v strictly above p.
    """

    s: tuple[int, ...]
    t: tuple[int, ...]
    alpha: tuple[Fraction, ...]
    beta_sq_bound: tuple[Fraction, ...]


@dataclass(frozen=True)
class MDSPSolution:
    x: tuple[int, ...]
    dist_sq: Fraction
    basis: LatticeBasis


def projection_length_sq(inst: MDSPInstance) -> Fraction:
    """Squared length of the projection of v onto span(B)."""
    return project_onto_span(inst.fixed, inst.rest.vectors).norm_sq()


def shift_ranges(inst: MDSPInstance) -> ShiftRanges:
    """Certified enumeration ranges for every shift coordinate.

    The admissible real interval for x_i is where the squared line
    projection (v.(b_i + x v))^2 / |b_i + x v|^2 stays at most p^2. That
    condition is a rational quadratic in x with positive leading
    coefficient, so its root interval is [-alpha_i - w, -alpha_i + w] with
    w^2 rational; the integer range takes the exact floor and ceiling of
    the endpoints.
    """
    v = inst.fixed
    v_sq = v.norm_sq()
    if v_sq == 0:
        raise DegenerateFixedVector("fixed vector is zero")
    p_sq = projection_length_sq(inst)
    lead = v_sq * (v_sq - p_sq)  # positive: v is outside span(B)
    s: list[int] = []
    t: list[int] = []
    alphas: list[Fraction] = []
    beta_sqs: list[Fraction] = []
    for b in inst.rest.vectors:
        w = v.dot(b)
        alpha = w / v_sq
        const = w * w - p_sq * b.norm_sq()  # <= 0 by nested projection
        beta_sq = alpha * alpha - const / lead
        s.append(floor_minus_sqrt(-alpha, beta_sq))
        t.append(ceil_plus_sqrt(-alpha, beta_sq))
        alphas.append(alpha)
        beta_sqs.append(beta_sq)
    return ShiftRanges(tuple(s), tuple(t), tuple(alphas), tuple(beta_sqs))


class _GramEvaluator:
    """Distance of v to span(B(x)) via a Gram-matrix update.

    dist^2 = det([v|B])^2 / det(Gram(B(x))), where the numerator is shift
    invariant and the shifted Gram entries follow from the cached inner
    products. Must agree exactly with the direct Gram-Schmidt route.
    """

    def __init__(self, inst: MDSPInstance):
        vecs = inst.rest.vectors
        self.gram = [[a.dot(b) for b in vecs] for a in vecs]
        self.vb = [inst.fixed.dot(b) for b in vecs]
        self.v_sq = inst.fixed.norm_sq()
        # det(Gram([v|B])) is invariant under shifts and equals
        # det([v|B])^2 whenever the instance is full dimensional
        full = (inst.fixed,) + vecs
        self.det_full_sq = _det_rows([[a.dot(b) for b in full] for a in full])

    def dist_sq(self, x: Sequence[int]) -> Fraction:
        g = self.gram
        vb = self.vb
        v_sq = self.v_sq
        n = len(vb)
        shifted = [
            [
                g[i][j] + x[i] * vb[j] + x[j] * vb[i] + x[i] * x[j] * v_sq
                for j in range(n)
            ]
            for i in range(n)
        ]
        return self.det_full_sq / _det_rows(shifted)


def shift_dist_sq(inst: MDSPInstance, x: Sequence[int]) -> Fraction:
    """dist^2 from v to span(B(x)) by the Gram-update route."""
    return _GramEvaluator(inst).dist_sq(x)


def solve_exact(
    inst: MDSPInstance,
    evaluator: Literal["gram", "direct"] = "gram",
) -> MDSPSolution:
    """Enumerate the certified ranges and return the maximizing shift.

    Ties are broken by the lexicographically smallest shift vector, which
    makes the result independent of any enumeration partitioning. If v is
    already orthogonal to span(B) the zero shift is returned immediately.
    """
    v = inst.fixed
    v_sq = v.norm_sq()
    if v_sq == 0:
        raise DegenerateFixedVector("fixed vector is zero")
    if projection_length_sq(inst) == 0:
        zero = (0,) * inst.n
        return MDSPSolution(zero, v_sq, apply_shift(inst, zero))
    ranges = shift_ranges(inst)
    if evaluator == "gram":
        dist_of = _GramEvaluator(inst).dist_sq
    else:
        def dist_of(x):
            return dist_sq_to_span(v, apply_shift(inst, x).vectors)
    best_x: tuple[int, ...] | None = None
    best_d: Fraction | None = None
    for x in product(*(range(lo, hi + 1) for lo, hi in zip(ranges.s, ranges.t))):
        d = dist_of(x)
        if best_d is None or d > best_d:
            best_d = d
            best_x = x
    assert best_x is not None and best_d is not None
    return MDSPSolution(best_x, best_d, apply_shift(inst, best_x))
