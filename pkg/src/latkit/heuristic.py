"""Greedy single-coordinate improvement of the sub-lattice distance.

One pass visits each basis vector in order, replaces b_i by b_i - a*v for
the integer a that minimizes the residual projection of v in the plane
orthogonal to the other basis vectors, and commits the change before
moving on. Passes repeat until a full pass makes no change or a cap is
hit; the distance never decreases along the way, but termination at the
optimum is not guaranteed in general.

The residual quantities for every coordinate are ratios of minors of the
integer-scaled Gram matrix of (b_1..b_n, v), and all of them share one
positive denominator per coordinate. They are read off the adjugate of
that Gram matrix, recomputed by fraction-free elimination only when a
shift is committed, so a no-update sweep costs one elimination total.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import DegenerateResidual, IndexOutOfRange
from .lattice import LatticeBasis, MDSPInstance
from .qlinalg import QVector, dist_sq_to_span


@dataclass(frozen=True)
class HeuristicConfig:
    max_passes: int = 64

    def __post_init__(self):
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")


@dataclass(frozen=True)
class HeuristicOutcome:
    """Accumulated shifts, final distance, and convergence status."""

    x_total: tuple[int, ...]
    dist_sq: Fraction
    converged: bool
    passes_used: int


def _adjugate_spd(a: list[list[int]]) -> list[list[int]]:
    """Adjugate of a symmetric positive definite integer matrix.

    One-step fraction-free Gauss-Jordan; every division is exact and no
    pivoting is needed because all leading principal minors are positive.
    A zero pivot before the last step means the matrix came from a
    dependent family (only the full determinant may vanish, and then only
    for a degenerate instance, which the caller reports).
    """
    n = len(a)
    m = [row[:] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    prev = 1
    width = 2 * n
    for k in range(n):
        pivot = m[k][k]
        if pivot <= 0 and k < n - 1:
            raise DegenerateResidual("Gram matrix is not positive definite")
        for i in range(n):
            if i == k:
                continue
            mik = m[i][k]
            row = m[i]
            rowk = m[k]
            for j in range(width):
                if j == k:
                    continue
                row[j] = (pivot * row[j] - mik * rowk[j]) // prev
            row[k] = 0
        prev = pivot
    return [row[n:] for row in m]


class _GramState:
    """Integer-scaled inner products of (b_1..b_n, v) plus their adjugate.

    The fixed vector occupies the last index of the bordered Gram matrix.
    Scaling clears denominators once; shift choices are invariant under
    positive scaling, and the actual basis vectors are updated alongside
    in their original coordinates.
    """

    def __init__(self, inst: MDSPInstance):
        self.v = inst.fixed
        self.vecs = list(inst.rest.vectors)
        self.n = len(self.vecs)
        scale = lcm(
            *(e.denominator for e in self.v.entries),
            *(e.denominator for b in self.vecs for e in b.entries),
        )
        self._iv = [int(e * scale) for e in self.v.entries]
        self._ib = [[int(e * scale) for e in b.entries] for b in self.vecs]
        rows = self._ib + [self._iv]
        self.phi = [
            [sum(x * y for x, y in zip(p, q)) for q in rows] for p in rows
        ]
        self._adj = _adjugate_spd(self.phi)

    def moments(self, i: int) -> tuple[int, int, int]:
        """Numerators of (|v''|^2, v''.b_i'', |b_i''|^2) over one positive
        common denominator, for coordinate i."""
        adj = self._adj
        last = self.n
        return adj[i][i], -adj[last][i], adj[last][last]

    def apply_shift(self, i: int, a: int) -> None:
        """Commit b_i := b_i - a v."""
        self.vecs[i] = self.vecs[i] - self.v.scaled(a)
        bi = self._ib[i]
        iv = self._iv
        for k in range(len(bi)):
            bi[k] -= a * iv[k]
        phi = self.phi
        rows = self._ib + [self._iv]
        for j in range(self.n + 1):
            if j != i:
                val = sum(x * y for x, y in zip(bi, rows[j]))
                phi[i][j] = val
                phi[j][i] = val
        phi[i][i] = sum(x * x for x in bi)
        self._adj = _adjugate_spd(phi)

    def instance(self) -> MDSPInstance:
        return MDSPInstance(
            self.v, LatticeBasis(self.vecs, validate=False), validate=False
        )


def _choose_shift(s: int, w: int, t: int) -> int:
    """Integer a in {floor, ceil} of w/s minimizing the residual projection.

    The squared projection of v'' on the line of b_i'' - a v'' is
    (w - a s)^2 / (t - 2 a w + a^2 s) up to a positive common factor;
    magnitudes are compared in exact squared form and a floor/ceil tie
    keeps the floor.
    """
    if s <= 0:
        raise DegenerateResidual("fixed vector lies in the span of the others")
    a1 = w // s  # floor; s is positive
    a2 = -((-w) // s)
    if a1 == a2:
        return a1
    n1 = (w - a1 * s) ** 2
    d1 = t - 2 * a1 * w + a1 * a1 * s
    n2 = (w - a2 * s) ** 2
    d2 = t - 2 * a2 * w + a2 * a2 * s
    return a1 if n1 * d2 <= n2 * d1 else a2


def improve_coordinate(inst: MDSPInstance, i: int) -> tuple[int, QVector]:
    """Best integer shift for coordinate i and the updated vector b_i - a*v.

    A zero shift means the coordinate is already optimal. Replacing b_i by
    the returned vector never decreases dist(v, span(B)).
    """
    if not (0 <= i < inst.n):
        raise IndexOutOfRange(f"coordinate {i} outside [0, {inst.n})")
    s, w, t = _GramState(inst).moments(i)
    a = _choose_shift(s, w, t)
    return a, inst.rest.vectors[i] - inst.fixed.scaled(a)


def _pass_over(state: _GramState) -> tuple[bool, list[int]]:
    deltas = [0] * state.n
    changed = False
    for i in range(state.n):
        s, w, t = state.moments(i)
        a = _choose_shift(s, w, t)
        if a != 0:
            state.apply_shift(i, a)
            deltas[i] = -a
            changed = True
    return changed, deltas


def _improve_pass(inst: MDSPInstance) -> tuple[MDSPInstance, bool, tuple[int, ...]]:
    state = _GramState(inst)
    changed, deltas = _pass_over(state)
    return state.instance() if changed else inst, changed, tuple(deltas)


def improve_pass(inst: MDSPInstance) -> tuple[MDSPInstance, bool]:
    """One in-order sweep over all coordinates, committing each improvement."""
    updated, changed, _ = _improve_pass(inst)
    return updated, changed


def run_heuristic(inst: MDSPInstance, cfg: HeuristicConfig = HeuristicConfig()) -> HeuristicOutcome:
    """Sweep until a pass makes no update or cfg.max_passes is reached."""
    state = _GramState(inst)
    x_total = [0] * inst.n
    converged = False
    passes = 0
    for _ in range(cfg.max_passes):
        passes += 1
        changed, deltas = _pass_over(state)
        for i, d in enumerate(deltas):
            x_total[i] += d
        if not changed:
            converged = True
            break
    final = state.instance()
    d_sq = dist_sq_to_span(final.fixed, final.rest.vectors)
    return HeuristicOutcome(tuple(x_total), d_sq, converged, passes)
