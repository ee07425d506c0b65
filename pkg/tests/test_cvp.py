import random
from fractions import Fraction as F

import pytest

from latkit.errors import DimensionCapExceeded
from latkit.cvp import (
    CVPGramInstance,
    cvp_to_mdsp,
    embed_cvp,
    mdsp_to_cvp,
    recover_mdsp_distance_sq,
    solve_cvp_bruteforce,
)
from latkit.exact import solve_exact
from latkit.lattice import LatticeBasis, MDSPInstance, apply_shift
from latkit.qlinalg import QMatrix, QVector, determinant, dist_sq_to_span
from oracles import cvp_exhaustive, random_mdsp_vectors


def make_instance(v, basis):
    return MDSPInstance(QVector(v), LatticeBasis([QVector(b) for b in basis]))


E1 = make_instance([0, 2], [[1, 1]])
DIM3 = make_instance([0, 0, 3], [[1, 0, 1], [0, 1, 2]])
E1_CVP = CVPGramInstance(QMatrix([[1]]), QVector([F(1, 2)]), F(4))


class TestForward:
    def test_worked(self):
        c = mdsp_to_cvp(E1)
        assert c.gram == QMatrix([[1]])
        assert c.offset == QVector([F(1, 2)])
        assert c.scale_sq == 4

    def test_orthogonal_offset_zero(self):
        inst = make_instance([0, 0, 3], [[1, 0, 0], [0, 1, 0]])
        c = mdsp_to_cvp(inst)
        assert c.offset == QVector([0, 0])

    def test_dim3_frozen(self):
        c = mdsp_to_cvp(DIM3)
        assert c.gram == QMatrix.identity(2)
        assert c.offset == QVector([F(1, 3), F(2, 3)])
        assert c.scale_sq == 9


class TestReverse:
    def test_worked(self):
        inst = cvp_to_mdsp(QMatrix([[1]]), QVector([F(-1, 2)]))
        assert inst.fixed == QVector([1, 0])
        assert inst.rest.vectors == (QVector([F(1, 2), 1]),)

    def test_zero_target_orthogonal(self):
        inst = cvp_to_mdsp(QMatrix.identity(2), QVector([0, 0]))
        assert all(inst.fixed.dot(b) == 0 for b in inst.rest.vectors)

    def test_round_trip_gram(self):
        rng = random.Random(103)
        for _ in range(20):
            n = rng.randint(1, 3)
            while True:
                l = QMatrix(
                    [
                        [F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
                        for _ in range(n)
                    ]
                )
                if determinant(l) != 0:
                    break
            t = QVector([F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)])
            inst = cvp_to_mdsp(l, t)
            c = mdsp_to_cvp(inst)
            assert c.gram == l @ l.transpose()
            from latkit.qlinalg import inverse

            gamma = inverse(l.transpose()).mul_vec(-t)
            assert c.offset == gamma
            assert c.scale_sq == 1


class TestBruteforce:
    def test_half_offset_tie(self):
        sol = solve_cvp_bruteforce(E1_CVP)
        assert sol.j == (-1,)
        assert sol.objective == F(1, 4)

    def test_identity_zero(self):
        c = CVPGramInstance(QMatrix.identity(3), QVector([0, 0, 0]), F(1))
        sol = solve_cvp_bruteforce(c)
        assert sol.j == (0, 0, 0)
        assert sol.objective == 0

    def test_frozen_scan(self):
        # frozen from an independent exhaustive scan over [-5, 5]^2
        c = CVPGramInstance(
            QMatrix([[2, 1], [1, 1]]), QVector([F(1, 3), F(1, 3)]), F(1)
        )
        sol = solve_cvp_bruteforce(c)
        assert sol.j == (0, -1)
        assert sol.objective == F(2, 9)

    def test_dimension_cap(self):
        c = CVPGramInstance(
            QMatrix.identity(7), QVector([0] * 7), F(1)
        )
        with pytest.raises(DimensionCapExceeded):
            solve_cvp_bruteforce(c)

    def test_matches_exhaustive_scan(self):
        rng = random.Random(107)
        checked = 0
        while checked < 20:
            n = rng.randint(1, 3)
            while True:
                a = QMatrix(
                    [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
                )
                if determinant(a) != 0:
                    break
            gram = a.transpose() @ a
            offset = QVector(
                [F(rng.randint(-4, 4), rng.randint(2, 5)) for _ in range(n)]
            )
            c = CVPGramInstance(gram, offset, F(1))
            scan = cvp_exhaustive([list(r) for r in gram.data], list(offset.entries))
            if scan is None:  # certified window too large for the oracle
                continue
            sol = solve_cvp_bruteforce(c)
            assert sol.objective == scan[0]
            assert sol.j == scan[1]
            checked += 1

    def test_scaling_preserves_argmin(self):
        rng = random.Random(109)
        for _ in range(10):
            n = rng.randint(1, 3)
            while True:
                a = QMatrix(
                    [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
                )
                if determinant(a) != 0:
                    break
            gram = a.transpose() @ a
            offset = QVector(
                [F(rng.randint(-4, 4), rng.randint(2, 5)) for _ in range(n)]
            )
            kappa = F(rng.randint(1, 9), rng.randint(1, 9))
            c1 = CVPGramInstance(gram, offset, F(1))
            scaled = QMatrix([[kappa * e for e in row] for row in gram.data])
            c2 = CVPGramInstance(scaled, offset, F(1))
            s1 = solve_cvp_bruteforce(c1)
            s2 = solve_cvp_bruteforce(c2)
            assert s1.j == s2.j
            assert s2.objective == kappa * s1.objective


class TestRecovery:
    def test_worked_values(self):
        assert recover_mdsp_distance_sq(E1_CVP, (0,)) == 2
        assert recover_mdsp_distance_sq(E1_CVP, (1,)) == F(2, 5)

    def test_orthogonal_full_norm(self):
        c = CVPGramInstance(QMatrix.identity(2), QVector([0, 0]), F(9))
        assert recover_mdsp_distance_sq(c, (0, 0)) == 9

    def test_quadratic_form_identity(self):
        rng = random.Random(113)
        for _ in range(20):
            inst = make_instance(*random_mdsp_vectors(rng, rng.randint(2, 4)))
            c = mdsp_to_cvp(inst)
            x = tuple(rng.randint(-3, 3) for _ in range(inst.n))
            d = dist_sq_to_span(inst.fixed, apply_shift(inst, x).vectors)
            assert d * (1 + c.scale_sq * c.objective(x)) == c.scale_sq
            assert recover_mdsp_distance_sq(c, x) == d


class TestEquivalence:
    def test_forward_argmin(self):
        rng = random.Random(127)
        for _ in range(15):
            inst = make_instance(*random_mdsp_vectors(rng, rng.randint(2, 4)))
            sol = solve_exact(inst)
            c = mdsp_to_cvp(inst)
            cvp_sol = solve_cvp_bruteforce(c)
            assert recover_mdsp_distance_sq(c, cvp_sol.j) == sol.dist_sq
            assert cvp_sol.j == sol.x

    def test_reverse_argmin(self):
        rng = random.Random(131)
        for _ in range(15):
            n = rng.randint(1, 3)
            while True:
                l = QMatrix(
                    [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
                )
                if determinant(l) != 0:
                    break
            t = QVector([F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)])
            inst = cvp_to_mdsp(l, t)
            mdsp_sol = solve_exact(inst)
            c = CVPGramInstance(
                l @ l.transpose(),
                mdsp_to_cvp(inst).offset,
                F(1),
            )
            cvp_sol = solve_cvp_bruteforce(c)
            assert cvp_sol.j == mdsp_sol.x
            # same objective when mapping the shift back to the CVP side
            assert c.objective(mdsp_sol.x) == cvp_sol.objective

    def test_unit_orthonormal_distance_law(self):
        from itertools import product as iproduct

        # standard orthonormal frames in dimensions 2..4
        for n in (1, 2, 3):
            dim = n + 1
            v = QVector([1] + [0] * n)
            basis = [
                QVector([0] * (i + 1) + [1] + [0] * (dim - i - 2)) for i in range(n)
            ]
            inst = MDSPInstance(v, LatticeBasis(basis))
            for x in iproduct(range(-3, 4), repeat=n):
                d = dist_sq_to_span(v, apply_shift(inst, x).vectors)
                assert d == F(1, 1 + sum(xi * xi for xi in x))
        # rational orthonormal pair from a 3-4-5 rotation
        v = QVector([F(3, 5), F(4, 5)])
        b = QVector([F(-4, 5), F(3, 5)])
        inst = MDSPInstance(v, LatticeBasis([b]))
        for x in range(-3, 4):
            d = dist_sq_to_span(v, apply_shift(inst, (x,)).vectors)
            assert d == F(1, 1 + x * x)


class TestEmbedding:
    def test_identity_exact(self):
        c = CVPGramInstance(QMatrix.identity(2), QVector([0, 0]), F(1))
        emb = embed_cvp(c, 64)
        assert emb.basis_rows[0] == QVector([1, 0])
        assert emb.basis_rows[1] == QVector([0, 1])

    def test_perfect_square_exact(self):
        c = CVPGramInstance(QMatrix([[4]]), QVector([0]), F(1))
        emb = embed_cvp(c, 64)
        assert emb.basis_rows[0] == QVector([2])

    def test_sqrt_two_within_tolerance(self):
        c = CVPGramInstance(QMatrix([[2]]), QVector([0]), F(1))
        emb = embed_cvp(c, 64)
        r = emb.basis_rows[0][0]
        assert abs(r * r - 2) / 2 <= F(1, 2) ** (64 - 8)

    def test_row_gram_reproduces(self):
        rng = random.Random(137)
        for bits in (32, 80):
            for _ in range(8):
                n = rng.randint(1, 3)
                while True:
                    a = QMatrix(
                        [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
                    )
                    if determinant(a) != 0:
                        break
                gram = a.transpose() @ a
                c = CVPGramInstance(gram, QVector([0] * n), F(1))
                emb = embed_cvp(c, bits)
                tol = F(1, 2) ** (bits - 8)
                for i in range(n):
                    for j in range(n):
                        got = emb.basis_rows[i].dot(emb.basis_rows[j])
                        want = gram[i, j]
                        if want == 0:
                            assert abs(got) <= tol
                        else:
                            assert abs(got - want) / abs(want) <= tol

    def test_precision_floor(self):
        with pytest.raises(ValueError):
            embed_cvp(E1_CVP, 16)
