"""Tests for multiplication maps and minimal free resolutions."""
import os
import sys
import unittest
from unittest.mock import patch

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.algebra.resolution import (
    betti_table,
    mu_table,
    s_general,
    s_nef_uniform,
    syzygies_from_balance,
)
from src.lattice.core import DivisorClass
from src.lattice.models import FatPointScheme, PointModel
from src.utils.validation import DomainError, ResolutionError, TheoryGapError


class TestCokernels(unittest.TestCase):
    """Tests for S and R of the multiplication maps."""

    def test_seven_points_special_classes(self):
        for l in range(3, 10):
            self.assertEqual(s_nef_uniform(7, 3 * l, 8 * l), 7)

    def test_eight_points_special_classes(self):
        self.assertEqual(s_nef_uniform(8, 54, 153), 48)
        self.assertEqual(s_nef_uniform(8, 37, 105), 16)
        self.assertEqual(s_nef_uniform(8, 205, 581), 16)

    def test_eight_point_recursion(self):
        # S(17s e0 - 6s E) stabilizes at 48 from s = 9 on and follows 14s - s^2 before
        for s in range(1, 21):
            expected = 48 if s >= 9 else 14 * s - s * s
            F = DivisorClass.uniform(8, 17 * s, 6 * s)
            self.assertEqual(s_general(F).S, expected, s)

    def test_eight_point_recursion_steps(self):
        # F_m = s(17e0 - 6E) - tK for m = 6s + t
        def S(m):
            s, t = divmod(m, 6)
            return s_general(DivisorClass.uniform(8, 17 * s + 3 * t, m)).S

        for s in range(3, 21):
            self.assertEqual(S(6 * s) - S(6 * (s - 3) + 1), 32, s)
            self.assertEqual(S(6 * s + 1) - S(6 * (s - 3) + 2), 16, s)

    def test_few_points_are_surjective_when_nef(self):
        for r in range(1, 6):
            for m in range(1, 6):
                d = 3 * m
                self.assertEqual(s_nef_uniform(r, m, d), 0)

    def test_not_nef(self):
        with self.assertRaises(DomainError):
            s_nef_uniform(7, 9, 23)

    def test_nine_points(self):
        model = PointModel.for_points(9)
        self.assertEqual(s_nef_uniform(9, 3, 9, model), 9)
        self.assertEqual(s_nef_uniform(9, 3, 9, PointModel.for_points(9, 2)), 6)
        self.assertEqual(s_nef_uniform(9, 3, 10, model), 0)
        self.assertEqual(s_nef_uniform(9, 3, 8, model), 1)

    def test_failure_at_seven_points(self):
        mu = s_general(DivisorClass.uniform(7, 24, 9))
        self.assertEqual((mu.h0_F, mu.h0_F_plus, mu.S, mu.R), (10, 36, 7, 1))

    def test_failure_at_five_points(self):
        mu = s_general(DivisorClass.uniform(5, 7, 3))
        self.assertEqual((mu.S, mu.R), (2, 5))

    def test_non_effective(self):
        mu = s_general(DivisorClass.uniform(5, 5, 3))
        self.assertEqual((mu.h0_F, mu.S, mu.R), (0, 1, 0))

    def test_theory_gap(self):
        with self.assertRaises(TheoryGapError):
            s_general(DivisorClass(7, (3, 2, 2, 2, 2, 2)))

    def test_rank_nullity(self):
        Z = FatPointScheme.create([4, 3, 2, 2, 1])
        for mu in mu_table(Z):
            self.assertEqual(mu.R - mu.S, 3 * mu.h0_F - mu.h0_F_plus)


class TestBettiTables(unittest.TestCase):
    """Tests for the graded Betti numbers."""

    def test_eight_point_example(self):
        table = betti_table(FatPointScheme.uniform(8, 205))
        self.assertEqual(table.generators, {579: 10, 580: 201, 581: 208, 582: 16})
        self.assertEqual(table.syzygies, {581: 138, 582: 216, 583: 80})
        self.assertEqual(table.regularity, 582)
        self.assertEqual(table.omega, 582)

    def test_five_triple_points(self):
        table = betti_table(FatPointScheme.uniform(5, 3))
        self.assertEqual(table.generators, {6: 1, 7: 3, 8: 2})
        self.assertEqual(table.syzygies, {8: 2, 9: 3})

    def test_nine_points_infinite_order(self):
        for m in range(1, 5):
            table = betti_table(FatPointScheme.uniform(9, m))
            self.assertEqual(table.generators, {3 * m: 1, 3 * m + 1: 3 * m})
            self.assertEqual(table.syzygies, {3 * m + 2: 3 * m})

    def test_rank_identity(self):
        for mults in ([1, 1, 1], [2, 2, 1, 1], [3, 2, 2, 1, 1], [4] * 6, [6] * 8, [2] * 7):
            table = betti_table(FatPointScheme.create(mults))
            self.assertEqual(sum(table.syzygies.values()), sum(table.generators.values()) - 1)
            self.assertLessEqual(max(table.syzygies, default=0), table.tau + 2)

    def test_generators_come_from_mu_table(self):
        Z = FatPointScheme.create([4, 3, 2, 2, 1])
        with patch('src.algebra.resolution.mu_table', wraps=mu_table) as spy:
            table = betti_table(Z)
        spy.assert_called_once()
        for mu in mu_table(Z):
            if table.alpha <= mu.degree <= table.tau:
                self.assertEqual(table.generators.get(mu.degree + 1, 0), mu.S, mu.degree)

    def test_balance_rejects_negative_syzygies(self):
        with self.assertRaises(ResolutionError):
            syzygies_from_balance({}, {0: 5}, 0, 0)


if __name__ == '__main__':
    unittest.main()
