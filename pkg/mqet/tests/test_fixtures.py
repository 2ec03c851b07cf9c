# Standard Library
from unittest import TestCase

# Third Party
import numpy as np

# MQET
from mqet.approx import sup_norm_estimate
from mqet.fixtures import (
    haar_unitary,
    non_commuting_pair,
    random_antidiagonal_bivariate,
    random_commuting_hermitians,
    random_contraction,
    random_normal,
    random_unit_sup_polymv,
    rng_for,
)
from mqet.matrices import commutator_norm, normality_defect, operator_norm


class TestFixtures(TestCase):
    def setUp(self):
        self.rng = rng_for(111)

    def test_should_repeat_with_seed(self):
        first = haar_unitary(4, rng_for(5))
        second = haar_unitary(4, rng_for(5))
        self.assertTrue(np.array_equal(first, second))

    def test_should_build_unitary(self):
        u = haar_unitary(8, self.rng)
        self.assertTrue(np.allclose(u.conj().T @ u, np.eye(8), atol=1e-12))

    def test_should_build_contraction_of_given_norm(self):
        self.assertAlmostEqual(operator_norm(random_contraction(4, self.rng, 0.7)), 0.7)

    def test_should_build_normal_matrix_inside_disk(self):
        matrix = random_normal(8, self.rng)
        self.assertLess(normality_defect(matrix), 1e-12)
        self.assertLessEqual(operator_norm(matrix), 1 + 1e-12)

    def test_should_build_commuting_hermitians(self):
        first, second = random_commuting_hermitians(4, 2, self.rng)
        self.assertTrue(np.allclose(first, first.conj().T))
        self.assertLess(commutator_norm(first, second), 1e-12)

    def test_should_build_non_commuting_pair(self):
        first, second = non_commuting_pair(4, self.rng)
        self.assertGreater(commutator_norm(first, second), 1e-3)

    def test_should_bound_random_polynomial(self):
        for num_vars in (1, 2, 3):
            p = random_unit_sup_polymv(num_vars, 3, self.rng)
            self.assertLessEqual(sup_norm_estimate(p), 1.0 + 1e-12)

    def test_should_fill_maximal_anti_diagonal(self):
        p = random_antidiagonal_bivariate(5, self.rng)
        rows, cols = np.indices((5, 5))
        self.assertTrue(np.all(p.coefficients[rows + cols >= 5] == 0))
        self.assertTrue(np.all(p.coefficients[rows + cols == 4] != 0))
