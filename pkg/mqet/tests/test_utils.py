# Standard Library
from unittest import TestCase

# Third Party
import numpy as np
from numpy.testing import assert_allclose

# MQET
from mqet.utils import (
    ContractViolation,
    DimensionMismatch,
    MqetError,
    NonFiniteValue,
    ceil_log2,
    complex_fsum,
    exact_dot,
    is_power_of_two,
    log2_exact,
    require_finite,
)


class TestPowersOfTwo(TestCase):
    def test_should_detect_powers_of_two(self):
        self.assertTrue(is_power_of_two(1))
        self.assertTrue(is_power_of_two(64))
        self.assertFalse(is_power_of_two(0))
        self.assertFalse(is_power_of_two(12))

    def test_should_count_qubits(self):
        self.assertEqual(log2_exact(1), 0)
        self.assertEqual(log2_exact(8), 3)
        with self.assertRaises(DimensionMismatch):
            log2_exact(6)

    def test_should_round_up_logarithm(self):
        self.assertEqual(ceil_log2(1), 0)
        self.assertEqual(ceil_log2(5), 3)
        self.assertEqual(ceil_log2(8), 3)
        with self.assertRaises(ValueError):
            ceil_log2(0)


class TestCompensatedSums(TestCase):
    def test_should_not_lose_small_terms(self):
        values = [1e16, 1.0 + 1j, -1e16]
        self.assertEqual(complex_fsum(values), 1.0 + 1j)

    def test_should_contract_short_vectors(self):
        result = exact_dot(np.array([1.0, 2.0]), np.array([[1, 2], [3, 4]]))
        assert_allclose(result, [7, 10])

    def test_should_compensate_long_vectors(self):
        # given
        weights = np.ones(100)
        values = np.zeros(100, dtype=complex)
        values[0], values[1], values[2] = 1e16, 1.0, -1e16
        # when
        result = exact_dot(weights, values)
        # then
        self.assertEqual(complex(result), 1.0)


class TestErrors(TestCase):
    def test_should_reject_non_finite(self):
        with self.assertRaises(NonFiniteValue):
            require_finite(np.array([1.0, np.inf]), "entry")
        require_finite(np.array([1.0, 2.0]))

    def test_should_carry_failures(self):
        error = ContractViolation("broken", ["eps", "ancillas"])
        self.assertIsInstance(error, MqetError)
        self.assertEqual(error.failures, ["eps", "ancillas"])
        self.assertEqual(str(error), "broken")
