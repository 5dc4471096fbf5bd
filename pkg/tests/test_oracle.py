"""Tests for the GF(p) interpolation oracle."""
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np
import pydantic
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.algebra.resolution import betti_table
from src.lattice.models import FatPointScheme
from src.oracle.linalg import MAX_PRIME, nullspace_mod_p, rank_mod_p, rref_mod_p
from src.oracle.verifier import (
    OracleConfig,
    dim_ideal,
    in_general_position,
    monomials,
    mu_rank,
    oracle_betti,
    sample_points,
    verify,
)
from src.utils.validation import (
    CharacteristicError,
    DegeneracyError,
    UnsupportedError,
    VerificationError,
)

P = 1000003


class TestLinearAlgebra(unittest.TestCase):
    """Tests for elimination over GF(p)."""

    def test_rank(self):
        self.assertEqual(rank_mod_p(np.array([[1, 2], [2, 4]]), 7), 1)
        self.assertEqual(rank_mod_p(np.eye(3, dtype=np.int64), 7), 3)
        self.assertEqual(rank_mod_p(np.array([[7, 14], [0, 0]]), 7), 0)
        self.assertEqual(rank_mod_p(np.zeros((0, 3), dtype=np.int64), 7), 0)

    def test_rref(self):
        R, pivots = rref_mod_p(np.array([[2, 4, 1], [1, 2, 4]]), 5)
        self.assertEqual(pivots, [0, 2])
        self.assertEqual(R[0].tolist(), [1, 2, 0])
        self.assertEqual(R[1].tolist(), [0, 0, 1])

    def test_nullspace(self):
        rng = np.random.default_rng(1)
        A = rng.integers(0, 101, size=(4, 7))
        N = nullspace_mod_p(A, 101)
        self.assertEqual(N.shape, (7 - rank_mod_p(A, 101), 7))
        self.assertFalse(((A @ N.T) % 101).any())
        self.assertEqual(rank_mod_p(N, 101), N.shape[0])

    def test_empty_nullspace_input(self):
        N = nullspace_mod_p(np.zeros((0, 4), dtype=np.int64), 11)
        self.assertEqual(N.shape, (4, 4))

    def test_rank_ignores_row_order(self):
        rng = np.random.default_rng(2)
        A = rng.integers(0, 13, size=(6, 5))
        A[5] = (A[0] + 3 * A[1]) % 13
        rank = rank_mod_p(A, 13)
        for _ in range(5):
            self.assertEqual(rank_mod_p(A[rng.permutation(6)], 13), rank)

    def test_prime_too_large(self):
        with self.assertRaises(CharacteristicError):
            rank_mod_p(np.eye(2, dtype=np.int64), MAX_PRIME + 11)


class TestOracleConfig(unittest.TestCase):
    """Tests for OracleConfig validation."""

    def test_defaults(self):
        cfg = OracleConfig()
        self.assertGreater(cfg.prime, cfg.max_degree + 1)

    def test_rejects_composite(self):
        with self.assertRaises(pydantic.ValidationError):
            OracleConfig(prime=1000001)

    def test_rejects_small_prime(self):
        with self.assertRaises(pydantic.ValidationError):
            OracleConfig(prime=41, max_degree=40)

    def test_degree_limit(self):
        cfg = OracleConfig(prime=P, max_degree=10)
        cfg.check_degree(10)
        with self.assertRaises(UnsupportedError):
            cfg.check_degree(11)


class TestSampling(unittest.TestCase):
    """Tests for point sampling."""

    def test_deterministic(self):
        cfg = OracleConfig(prime=P, seed=42)
        self.assertEqual(sample_points(8, cfg), sample_points(8, cfg))
        self.assertNotEqual(sample_points(8, cfg, attempt=0), sample_points(8, cfg, attempt=1))

    def test_general_position(self):
        points = sample_points(7, OracleConfig(prime=P, seed=3))
        self.assertTrue(in_general_position(points, P))
        self.assertTrue(all(z == 1 for _, _, z in points))

    def test_special_positions(self):
        self.assertFalse(in_general_position([(0, 0, 1), (1, 1, 1), (2, 2, 1)], P))
        self.assertFalse(in_general_position([(0, 0, 1), (0, 0, 1)], P))
        # six points on the conic y = x^2
        conic = [(t, t * t, 1) for t in range(1, 7)]
        self.assertFalse(in_general_position(conic, P))

    def test_degenerate_samples(self):
        cfg = OracleConfig(prime=P, resample_limit=3)
        with patch('src.oracle.verifier.in_general_position', return_value=False):
            with self.assertRaises(DegeneracyError):
                sample_points(5, cfg)

    def test_prime_below_point_count(self):
        with self.assertRaises(CharacteristicError):
            sample_points(6, OracleConfig(prime=5, max_degree=2))


class TestIdealDimensions(unittest.TestCase):
    """Tests for the interpolation matrices."""

    def setUp(self):
        self.cfg = OracleConfig(prime=P, seed=0)

    def test_monomials(self):
        self.assertEqual(len(monomials(4)), 15)
        self.assertEqual(monomials(1), ((1, 0), (0, 1), (0, 0)))

    def test_small_dimensions(self):
        points = sample_points(1, self.cfg)
        self.assertEqual(dim_ideal(FatPointScheme.create([1]), 1, points, P), 2)
        self.assertEqual(dim_ideal(FatPointScheme.create([2]), 1, points, P), 0)
        self.assertEqual(dim_ideal(FatPointScheme.create([2]), 2, points, P), 3)

    def test_conic_through_five_points(self):
        Z = FatPointScheme.uniform(5, 3)
        points = sample_points(5, self.cfg)
        self.assertEqual(dim_ideal(Z, 6, points, P), 1)
        self.assertEqual(dim_ideal(Z, 5, points, P), 0)

    def test_mu_rank_failure(self):
        Z = FatPointScheme.uniform(7, 9)
        mu = mu_rank(Z, 24, sample_points(7, self.cfg), P)
        self.assertEqual((mu.dim_I, mu.dim_I_next), (10, 36))
        self.assertEqual((mu.ker, mu.coker), (1, 7))


class TestVerify(unittest.TestCase):
    """Tests for verify and oracle_betti."""

    def setUp(self):
        self.cfg = OracleConfig(prime=P, seed=0, resample_limit=3)

    def test_schemes_agree(self):
        for Z in (FatPointScheme.uniform(7, 3), FatPointScheme.uniform(9, 2), FatPointScheme.create([3, 2, 2, 1, 1])):
            report = verify(Z, self.cfg)
            self.assertTrue(report.match, Z.multiplicities)
            self.assertFalse(report.hilbert_only)
            self.assertTrue(all(row.match for row in report.rows))

    def test_hilbert_only_outside_closed_forms(self):
        report = verify(FatPointScheme.create([3, 2, 2, 2, 2, 2]), self.cfg)
        self.assertTrue(report.hilbert_only)
        self.assertTrue(report.match)

    def test_mismatch_raises(self):
        def wrong_rows(Z, low, high):
            return {d: {'dim': -1, 'ker': None, 'nu_next': None} for d in range(low, high + 1)}, True

        with patch('src.oracle.verifier._closed_rows', side_effect=wrong_rows):
            with self.assertRaises(VerificationError):
                verify(FatPointScheme.uniform(4, 2), self.cfg)

    def test_degree_limit(self):
        with self.assertRaises(UnsupportedError):
            verify(FatPointScheme.uniform(8, 205), self.cfg)

    def test_oracle_betti_matches_closed_form(self):
        Z = FatPointScheme.uniform(5, 3)
        oracle = oracle_betti(Z, self.cfg)
        closed = betti_table(Z)
        self.assertEqual(oracle.generators, closed.generators)
        self.assertEqual(oracle.syzygies, closed.syzygies)
        self.assertEqual(oracle.source, "oracle")


@pytest.mark.slow
class TestOracleSweep(unittest.TestCase):
    """Oracle agreement over uniform schemes and seeded random tuples."""

    def test_uniform_sweep(self):
        cfg = OracleConfig(prime=P, seed=7)
        for r in range(1, 10):
            for m in range(1, 6):
                report = verify(FatPointScheme.uniform(r, m), cfg)
                self.assertTrue(report.match, (r, m))
                self.assertFalse(report.hilbert_only, (r, m))

    def test_random_tuples(self):
        cfg = OracleConfig(prime=P, seed=11)
        rng = np.random.default_rng(2024)
        for _ in range(20):
            r = int(rng.integers(1, 6))
            mults = [int(a) for a in rng.integers(1, 5, size=r)]
            report = verify(FatPointScheme.create(mults), cfg)
            self.assertTrue(report.match, mults)
            self.assertFalse(report.hilbert_only, mults)


if __name__ == '__main__':
    unittest.main()
