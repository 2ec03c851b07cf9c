# Standard Library
from unittest import TestCase

# Third Party
import numpy as np
from numpy.testing import assert_allclose

# MQET
from mqet.app_settings import Tolerances
from mqet.blockenc import (
    adjoint,
    dilate,
    extract_block,
    lcu,
    padded,
    product,
    product_chain,
    rescaled,
    unitary_be,
    verify_be,
)
from mqet.fixtures import haar_unitary, random_contraction, random_normal, rng_for
from mqet.models import BlockEncoding, CostLedger, as_array
from mqet.operators import DenseOperator
from mqet.utils import DimensionMismatch, EmptyCombination, NormTooLarge, NotUnitary


def with_epsilon(be: BlockEncoding, epsilon: float) -> BlockEncoding:
    return BlockEncoding(
        be.unitary, be.alpha, be.ancillas, epsilon, be.system_qubits, be.ledger
    )


class TestDilation(TestCase):
    def setUp(self):
        self.rng = rng_for(31)

    def test_should_extract_identity(self):
        be = unitary_be(np.eye(2))
        assert_allclose(as_array(extract_block(be)), np.eye(2))
        self.assertEqual(be.ancillas, 0)

    def test_should_recover_dilated_matrix(self):
        # given
        a = random_contraction(4, self.rng)
        # when
        be = dilate(a)
        # then
        self.assertLess(verify_be(be, a), 1e-12)
        self.assertEqual((be.alpha, be.ancillas, be.epsilon), (1.0, 1, 0.0))
        self.assertEqual(be.ledger.counts, {"U": 1})

    def test_should_put_identities_off_diagonal_for_zero(self):
        unitary = as_array(dilate(np.zeros((2, 2))).matrix)
        expected = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
        assert_allclose(unitary, expected, atol=1e-12)

    def test_should_be_block_diagonal_for_unitary(self):
        u = haar_unitary(2, self.rng)
        unitary = as_array(dilate(u).matrix)
        assert_allclose(unitary[:2, 2:], 0, atol=1e-7)
        assert_allclose(unitary[2:, :2], 0, atol=1e-7)
        assert_allclose(unitary[2:, 2:], -u.conj().T, atol=1e-12)

    def test_should_scale_by_alpha(self):
        a = 2.5 * random_contraction(2, self.rng)
        be = dilate(a, 3.0)
        self.assertLess(verify_be(be, a), 1e-12)
        assert_allclose(be.block(), a / 3.0, atol=1e-12)

    def test_should_stay_unitary_for_many_contractions(self):
        for index in range(1000):
            dim = 2 if index % 2 else 4
            norm = 1.0 if index % 10 == 0 else self.rng.uniform(0, 1)
            be = dilate(random_contraction(dim, self.rng, norm))
            unitary = as_array(be.matrix)
            defect = np.linalg.norm(unitary.conj().T @ unitary - np.eye(2 * dim), 2)
            self.assertLess(defect, 1e-9)

    def test_should_reject_large_norm(self):
        with self.assertRaises(NormTooLarge):
            dilate(2 * np.eye(2))

    def test_should_reject_non_qubit_dimension(self):
        with self.assertRaises(DimensionMismatch):
            dilate(np.eye(3) / 2)


class TestVerify(TestCase):
    def test_should_measure_perturbation(self):
        # given
        rng = rng_for(32)
        a = random_contraction(4, rng, 0.5)
        e = random_contraction(4, rng, 1.0)
        be = with_epsilon(dilate(a + 0.05 * e), 0.1)
        # when
        distance = verify_be(be, a)
        # then
        self.assertAlmostEqual(distance, 0.05, delta=1e-10)
        self.assertLessEqual(distance, be.epsilon)

    def test_should_flag_wrong_target(self):
        be = dilate(np.eye(2) * 0.5)
        self.assertGreater(verify_be(be, -0.5 * np.eye(2)), be.epsilon)

    def test_should_reject_target_of_wrong_size(self):
        with self.assertRaises(DimensionMismatch):
            verify_be(dilate(np.eye(2) * 0.5), np.eye(4))


class TestAdjoint(TestCase):
    def setUp(self):
        self.rng = rng_for(33)

    def test_should_keep_hermitian_block(self):
        a = random_contraction(4, self.rng)
        be = dilate((a + a.conj().T) / 2)
        assert_allclose(
            as_array(extract_block(adjoint(be))), as_array(extract_block(be)), atol=1e-12
        )

    def test_should_be_an_involution(self):
        be = dilate(random_contraction(2, self.rng))
        twice = adjoint(adjoint(be))
        assert_allclose(as_array(twice.matrix), as_array(be.matrix))
        self.assertEqual(twice.ledger, be.ledger)

    def test_should_conjugate_transpose_block(self):
        # given
        a = random_contraction(4, self.rng)
        be = with_epsilon(dilate(a, 2.0, oracle="U_M"), 0.01)
        # when
        dagger = adjoint(be)
        # then
        assert_allclose(as_array(extract_block(dagger)), a.conj().T, atol=1e-12)
        self.assertEqual((dagger.alpha, dagger.ancillas, dagger.epsilon), (2.0, 1, 0.01))
        self.assertEqual(dagger.ledger.counts, {"U_M": 1})


class TestProduct(TestCase):
    def setUp(self):
        self.rng = rng_for(34)

    def test_should_follow_parameter_formulas(self):
        # given
        first = with_epsilon(dilate(random_contraction(2, self.rng), 2.0), 0.1)
        second = with_epsilon(padded(dilate(random_contraction(2, self.rng), 3.0), 2), 0.05)
        # when
        result = product(first, second)
        # then
        self.assertEqual(result.alpha, 6.0)
        self.assertEqual(result.ancillas, 3)
        self.assertEqual(result.epsilon, 2.0 * 0.05 + 3.0 * 0.1)
        self.assertAlmostEqual(result.epsilon, 0.4)

    def test_should_multiply_identities(self):
        result = product(unitary_be(np.eye(2)), unitary_be(np.eye(2)))
        assert_allclose(as_array(extract_block(result)), np.eye(2))
        self.assertEqual(result.alpha, 1.0)

    def test_should_multiply_blocks(self):
        for index in range(1000):
            # given
            dim = 2 if index % 2 else 4
            alpha, beta = self.rng.uniform(1, 3, size=2)
            eps_a, eps_b = self.rng.uniform(0, 0.1, size=2)
            a = alpha * random_contraction(dim, self.rng)
            b = beta * random_contraction(dim, self.rng)
            first = with_epsilon(dilate(a, alpha, "U_A"), eps_a)
            second = with_epsilon(padded(dilate(b, beta, "U_B"), 1 + index % 3), eps_b)
            # when
            result = product(first, second)
            # then
            self.assertLess(verify_be(result, a @ b), 1e-9)
            self.assertEqual(result.alpha, alpha * beta)
            self.assertEqual(result.ancillas, 1 + second.ancillas)
            self.assertEqual(result.epsilon, alpha * eps_b + beta * eps_a)

    def test_should_add_ledgers(self):
        first = dilate(random_contraction(2, self.rng), oracle="U_A")
        second = dilate(random_contraction(2, self.rng), oracle="U_A")
        third = dilate(random_contraction(2, self.rng), oracle="U_B")
        result = product_chain([first, second, third])
        self.assertEqual(result.ledger.counts, {"U_A": 2, "U_B": 1})
        summed = first.ledger + second.ledger + third.ledger
        self.assertEqual(result.ledger.counts, summed.counts)
        self.assertEqual(result.ledger.ancilla_high_water, 3)

    def test_should_reject_system_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            product(dilate(np.eye(2) / 2), dilate(np.eye(4) / 2))

    def test_should_reject_empty_chain(self):
        with self.assertRaises(EmptyCombination):
            product_chain([])


class TestLcu(TestCase):
    def setUp(self):
        self.rng = rng_for(35)

    def test_should_add_one_ancilla_for_single_term(self):
        # given
        a = random_contraction(2, self.rng)
        be = dilate(a)
        # when
        result = lcu([be], [1])
        # then
        self.assertLess(verify_be(result, a), 1e-12)
        self.assertEqual(result.ancillas, be.ancillas + 1)

    def test_should_give_hermitian_part(self):
        # given
        m = random_normal(4, self.rng)
        be = dilate(m, oracle="U_M")
        # when
        result = lcu([be, adjoint(be)], [0.5, 0.5])
        # then
        self.assertLess(verify_be(result, (m + m.conj().T) / 2), 1e-12)
        self.assertEqual(result.ledger.counts, {"U_M": 2})

    def test_should_match_weighted_sum(self):
        for index in range(1000):
            # given
            count = 2 + index % 7
            terms = [haar_unitary(4, self.rng) for _ in range(count)]
            weights = self.rng.standard_normal(count) + 1j * self.rng.standard_normal(count)
            encodings = [unitary_be(t, oracle=f"U{j}") for j, t in enumerate(terms)]
            # when
            result = lcu(encodings, weights)
            # then
            expected = sum(w * t for w, t in zip(weights, terms))
            self.assertLess(verify_be(result, expected), 1e-9)
            self.assertAlmostEqual(result.alpha, float(np.sum(np.abs(weights))), places=12)
            self.assertEqual(result.ancillas, max(1, int(np.ceil(np.log2(count)))))

    def test_should_pad_ancillas_and_sum_errors(self):
        # given
        first = with_epsilon(dilate(random_contraction(2, self.rng), 2.0), 0.01)
        second = with_epsilon(padded(dilate(random_contraction(2, self.rng)), 3), 0.02)
        # when
        result = lcu([first, second], [0.5, -1j])
        # then
        self.assertEqual(result.ancillas, 4)
        self.assertEqual(result.alpha, 0.5 * 2.0 + 1.0 * 1.0)
        self.assertAlmostEqual(result.epsilon, 0.5 * 0.01 + 1.0 * 0.02)

    def test_should_drop_zero_coefficients(self):
        # given
        a, b = random_contraction(2, self.rng), random_contraction(2, self.rng)
        encodings = [dilate(a, oracle="U_A"), dilate(b, oracle="U_B")]
        # when
        result = lcu(encodings, [0.7, 0])
        # then
        self.assertEqual(result.ledger.counts, {"U_A": 1})
        self.assertLess(verify_be(result, 0.7 * a), 1e-12)

    def test_should_reject_bad_combinations(self):
        be = dilate(np.eye(2) / 2)
        with self.assertRaises(EmptyCombination):
            lcu([], [])
        with self.assertRaises(EmptyCombination):
            lcu([be, be], [0, 0])
        with self.assertRaises(DimensionMismatch):
            lcu([be, dilate(np.eye(4) / 2)], [1, 1])


class TestRescaled(TestCase):
    def test_should_scale_alpha_and_epsilon(self):
        be = with_epsilon(dilate(np.eye(2) / 2), 0.1)
        result = rescaled(be, 4.0)
        self.assertEqual((result.alpha, result.epsilon), (4.0, 0.4))
        assert_allclose(as_array(extract_block(result)), 2 * np.eye(2))


class TestCostLedger(TestCase):
    def test_should_merge_and_scale(self):
        ledger = CostLedger.of({"U": 2}) + CostLedger.of({"U": 1, "V": 3}, 4)
        self.assertEqual(ledger.counts, {"U": 3, "V": 3})
        self.assertEqual(ledger.scaled(2).total, 12)
        self.assertEqual(ledger.ancilla_high_water, 4)

    def test_should_reject_negative_counts(self):
        with self.assertRaises(ValueError):
            CostLedger.of({"U": -1})


class TestUnitarityCheck(TestCase):
    def setUp(self):
        self.nearly = np.eye(4)
        self.nearly[0, 0] += 2e-10

    def test_should_reject_non_unitary(self):
        with self.assertRaises(NotUnitary):
            BlockEncoding(DenseOperator(2 * np.eye(4)), 1.0, 1, 0.0, 1)

    def test_should_honour_loosened_tolerance(self):
        # given
        u = haar_unitary(4, rng_for(36))
        u[0, 0] += 1e-7
        tol = Tolerances().override(unitarity=1e-3)
        # when
        be = BlockEncoding(DenseOperator(u), 1.0, 1, 0.0, 1, CostLedger(), tol=tol)
        # then
        self.assertEqual(be.ancillas, 1)
        with self.assertRaises(NotUnitary):
            BlockEncoding(DenseOperator(u), 1.0, 1, 0.0, 1, tol=Tolerances())

    def test_should_accept_dilation_defects_only_when_derived(self):
        tol = Tolerances()
        with self.assertRaises(NotUnitary):
            unitary_be(self.nearly, tol=tol)
        be = BlockEncoding(
            DenseOperator(self.nearly), 1.0, 1, 0.0, 1, tol=tol.for_dilations()
        )
        self.assertEqual(be.system_qubits, 1)

    def test_should_thread_tolerance_through_combinators(self):
        # given
        tol = Tolerances().override(unitarity=1e-6)
        be = unitary_be(self.nearly, tol=tol)
        # when
        results = [
            adjoint(be, tol),
            padded(be, 2, tol),
            rescaled(be, 2.0, tol),
            product(be, be, tol),
            lcu([be, be], [0.5, 0.5], tol=tol),
        ]
        # then
        for result in results:
            self.assertEqual(result.system_qubits, 2)
        with self.assertRaises(NotUnitary):
            product(be, be)
