"""Tests for exceptional classes, nef/effective tests and fixed parts."""
import os
import random
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.lattice.cones import (
    EPSILON,
    ETA,
    exceptional_classes,
    fixed_part,
    is_effective,
    is_nef,
    thresholds,
    uniform_abnormal_class,
    uniform_alpha_degree,
    uniform_beta_degree,
    zariski_decompose,
)
from src.lattice.core import (
    DivisorClass,
    canonical_class,
    intersect,
    is_chamber,
    self_intersection,
    weyl_normal_form,
)
from src.lattice.models import PointModel
from src.utils.validation import DomainError, UnsupportedError


class TestExceptionalClasses(unittest.TestCase):
    """Tests for the (-1)-classes on r <= 8 points."""

    def test_counts(self):
        expected = {1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
        for r, count in expected.items():
            self.assertEqual(len(exceptional_classes(r)), count)

    def test_numerical_characterization(self):
        for r in range(1, 9):
            K = canonical_class(r)
            for E in exceptional_classes(r):
                self.assertEqual(self_intersection(E), -1)
                self.assertEqual(intersect(E, K), -1)

    def test_infinitely_many_beyond_eight(self):
        with self.assertRaises(UnsupportedError):
            exceptional_classes(9)


class TestNefAndEffective(unittest.TestCase):
    """Tests for is_nef and is_effective."""

    def test_nef_basics(self):
        self.assertTrue(is_nef(DivisorClass.e(5, 0)))
        self.assertFalse(is_nef(DivisorClass.e(1, 1)))
        self.assertFalse(is_nef(DivisorClass(-1, (0, 0))))

    def test_uniform_nef_threshold(self):
        for r in range(1, 9):
            eta = ETA[r]
            for m in range(1, 13):
                d = -((-eta.numerator * m) // eta.denominator)
                self.assertTrue(is_nef(DivisorClass.uniform(r, d, m)), (r, d, m))
                self.assertFalse(is_nef(DivisorClass.uniform(r, d - 1, m)), (r, d - 1, m))

    def test_nine_points_unsorted(self):
        self.assertTrue(is_nef(DivisorClass(3, (1,) * 9)))
        self.assertTrue(is_nef(DivisorClass(7, (0, 2, 2, 2, 2, 2, 2, 2, 2))))
        self.assertFalse(is_nef(DivisorClass(5, (2,) * 9)))

    def test_effective(self):
        self.assertTrue(is_effective(DivisorClass(5, (3, 3, 3))))
        self.assertFalse(is_effective(DivisorClass(5, (3,) * 5)))
        self.assertTrue(is_effective(DivisorClass(6, (3,) * 5)))
        self.assertTrue(is_effective(DivisorClass(579, (205,) * 8)))
        self.assertFalse(is_effective(DivisorClass(578, (205,) * 8)))

    def test_nef_agrees_with_normal_form(self):
        # exhaustive test over the (-1)-classes against the chamber criterion
        rng = random.Random(29)
        for _ in range(1000):
            r = rng.randint(1, 8)
            F = DivisorClass(rng.randint(0, 12), tuple(rng.randint(-2, 6) for _ in range(r)))
            self.assertEqual(is_nef(F), is_chamber(weyl_normal_form(F).output), F)

    def test_thresholds(self):
        self.assertEqual(thresholds(8).epsilon, Fraction(48, 17))
        self.assertEqual(EPSILON[9], ETA[9])
        with self.assertRaises(UnsupportedError):
            thresholds(10)


class TestUniformDegrees(unittest.TestCase):
    """Tests for the uniform alpha and beta thresholds."""

    def test_example_degrees(self):
        self.assertEqual(uniform_alpha_degree(8, 205), 579)
        self.assertEqual(uniform_beta_degree(8, 205), 581)
        self.assertEqual(uniform_alpha_degree(7, 9), 24)
        self.assertEqual(uniform_beta_degree(7, 9), 24)

    def test_conjectural_alpha(self):
        # least d with binom(d + 2, 2) > 10 * binom(7, 2) = 210
        self.assertEqual(uniform_alpha_degree(10, 6), 20)
        self.assertEqual(uniform_alpha_degree(10, 1), 4)

    def test_beta_unknown_beyond_nine(self):
        with self.assertRaises(UnsupportedError):
            uniform_beta_degree(10, 3)

    def test_abnormal_classes(self):
        self.assertEqual(uniform_abnormal_class(6), DivisorClass.uniform(6, 12, 5))
        for r in (1, 4, 9, 10):
            self.assertIsNone(uniform_abnormal_class(r))
        for r in (2, 3, 5, 6, 7, 8):
            E = uniform_abnormal_class(r)
            self.assertLess(self_intersection(E), 0)


class TestFixedParts(unittest.TestCase):
    """Tests for fixed_part and zariski_decompose."""

    def test_three_lines(self):
        F = DivisorClass(5, (3, 3, 3))
        decomposition = fixed_part(F)
        lines = {DivisorClass(1, (0, 1, 1)), DivisorClass(1, (1, 0, 1)), DivisorClass(1, (1, 1, 0))}
        self.assertEqual({c for c, _ in decomposition.parts}, lines)
        self.assertTrue(all(k == 1 for _, k in decomposition.parts))
        self.assertEqual(decomposition.H, DivisorClass(2, (1, 1, 1)))
        self.assertEqual(zariski_decompose(F).H, decomposition.H)

    def test_line_through_two_points(self):
        decomposition = fixed_part(DivisorClass(1, (1, 1)))
        self.assertEqual(decomposition.parts, ((DivisorClass(1, (1, 1)), 1),))
        self.assertEqual(decomposition.H, DivisorClass.zero(2))

    def test_eight_point_example(self):
        decomposition = zariski_decompose(DivisorClass(580, (205,) * 8))
        self.assertEqual(decomposition.H, DivisorClass(340, (120,) * 8))
        self.assertEqual(decomposition.N, DivisorClass(240, (85,) * 8))
        self.assertEqual(len(decomposition.parts), 8)
        self.assertTrue(is_nef(decomposition.H))

    def test_anticanonical_on_cubic(self):
        F = DivisorClass(15, (5,) * 9)
        finite = zariski_decompose(F, PointModel.for_points(9, 2))
        self.assertEqual(finite.N, DivisorClass(3, (1,) * 9))
        infinite = zariski_decompose(F, PointModel.for_points(9))
        self.assertEqual(infinite.N, F)
        self.assertEqual(fixed_part(F, PointModel.for_points(9, 2)).N, finite.N)

    def test_nef_class_has_no_fixed_part(self):
        decomposition = zariski_decompose(DivisorClass(17, (6,) * 8))
        self.assertEqual(decomposition.parts, ())

    def test_not_effective(self):
        with self.assertRaises(DomainError):
            zariski_decompose(DivisorClass(5, (3,) * 5))

    def test_decomposition_is_idempotent(self):
        rng = random.Random(13)
        checked = 0
        while checked < 300:
            r = rng.randint(1, 8)
            F = DivisorClass(rng.randint(0, 15), tuple(rng.randint(0, 6) for _ in range(r)))
            if not is_effective(F):
                continue
            checked += 1
            decomposition = zariski_decompose(F)
            self.assertEqual(decomposition.H + decomposition.N, F)
            self.assertTrue(is_nef(decomposition.H), F)
            again = zariski_decompose(decomposition.H)
            self.assertEqual(again.H, decomposition.H, F)
            self.assertEqual(again.parts, (), F)
        for m in range(1, 6):
            for d in range(3 * m, 3 * m + 3):
                H = zariski_decompose(DivisorClass.uniform(9, d, m)).H
                self.assertEqual(zariski_decompose(H).H, H)


if __name__ == '__main__':
    unittest.main()
