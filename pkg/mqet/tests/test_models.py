# Standard Library
from unittest import TestCase

# Third Party
import numpy as np
from numpy.testing import assert_allclose

# MQET
from mqet.app_settings import Tolerances
from mqet.models import (
    ChebSeries1,
    CostReport,
    DecompositionTerm,
    FunctionSpec,
    Poly1,
    PolyMV,
    PrepareOracle,
    ProductDecomposition,
    RunConfig,
)
from mqet.utils import DimensionMismatch, NonFiniteValue, NotUnitary


class TestPoly1(TestCase):
    def test_should_trim_trailing_zeros(self):
        p = Poly1([1, 2, 0, 0])
        self.assertEqual(p.degree, 1)
        self.assertEqual(Poly1([0, 0]).degree, 0)
        self.assertTrue(Poly1([0, 0]).is_zero)

    def test_should_find_interior_maximum(self):
        # 1 - 2x^2 + x^4 peaks only at x = 0 inside the interval
        p = Poly1([1, 0, -2, 0, 1])
        self.assertAlmostEqual(p.sup_norm(), 1.0)

    def test_should_find_complex_maximum(self):
        p = Poly1([0.5, 0.5j])
        self.assertAlmostEqual(p.sup_norm(), np.sqrt(0.5))

    def test_should_do_arithmetic(self):
        p = Poly1([1, 1]) * Poly1([-1, 1])
        assert_allclose(p.coefficients, [-1, 0, 1])
        assert_allclose((p - Poly1([-1])).coefficients, [0, 0, 1])
        assert_allclose((2 * Poly1([1, 1])).coefficients, [2, 2])
        assert_allclose(p.derivative().coefficients, [0, 2])

    def test_should_reject_non_finite_coefficients(self):
        with self.assertRaises(NonFiniteValue):
            Poly1([1, np.nan])
        with self.assertRaises(ValueError):
            Poly1([])

    def test_should_convert_series(self):
        series = ChebSeries1([0, 0, 1])
        assert_allclose(series.to_poly().coefficients, [-1, 0, 2])
        self.assertAlmostEqual(series(0.5), -0.5)


class TestPolyMV(TestCase):
    def test_should_evaluate_on_points_and_grids(self):
        # given x + 2 y^2
        p = PolyMV([[0, 0, 2], [1, 0, 0]])
        # when / then
        self.assertAlmostEqual(p(0.5, -1.0), 2.5)
        grid = p.evaluate_grid([np.array([0.0, 1.0]), np.array([0.0, 1.0])])
        assert_allclose(grid, [[0, 2], [1, 3]])

    def test_should_report_true_degrees(self):
        p = PolyMV(np.pad([[1, 1], [0, 0]], ((0, 2), (0, 1))))
        self.assertEqual(p.degree_bounds, (4, 3))
        self.assertEqual(p.degrees, (0, 1))

    def test_should_pad_without_shrinking(self):
        p = PolyMV([[1, 2]]).padded((3, 3))
        self.assertEqual(p.degree_bounds, (3, 3))
        with self.assertRaises(ValueError):
            p.padded((2, 3))
        with self.assertRaises(DimensionMismatch):
            p.padded((3,))

    def test_should_reject_wrong_coordinate_count(self):
        with self.assertRaises(DimensionMismatch):
            PolyMV([[1]])(0.0)
        with self.assertRaises(DimensionMismatch):
            PolyMV(1.0)


class TestFunctionSpec(TestCase):
    def test_should_broadcast_constant_functions(self):
        f = FunctionSpec(2, lambda x, y: 1.0)
        self.assertEqual(f(np.zeros(3), 0.5).shape, (3,))

    def test_should_validate_declarations(self):
        with self.assertRaises(ValueError):
            FunctionSpec(0, lambda: 0)
        with self.assertRaises(ValueError):
            FunctionSpec(1, lambda x: x, smoothness=2)
        with self.assertRaises(ValueError):
            FunctionSpec(1, lambda x: x, smoothness=-1, derivative_bound=1.0)

    def test_should_wrap_polynomial(self):
        f = FunctionSpec.from_polynomial(PolyMV([[0, 1], [1, 0]]))
        self.assertEqual(f.arity, 2)
        self.assertAlmostEqual(f(0.25, 0.5), 0.75)


class TestProductDecomposition(TestCase):
    def test_should_validate_term_indices(self):
        tail = Poly1([1])
        with self.assertRaises(DimensionMismatch):
            ProductDecomposition(1, 2, (DecompositionTerm((0, 0), tail, 1.0),))
        with self.assertRaises(ValueError):
            ProductDecomposition(1, 2, (DecompositionTerm((2,), tail, 1.0),))

    def test_should_evaluate_normalized_terms(self):
        # given 0.5 T_1(x) y
        term = DecompositionTerm((1,), Poly1([0, 1]), 0.5)
        decomposition = ProductDecomposition(1, 2, (term,), normalized=True)
        # then
        self.assertAlmostEqual(decomposition(0.5, 0.5), 0.125)
        self.assertEqual(decomposition.beta_l1, 0.5)


class TestReports(TestCase):
    def test_should_list_contract_failures(self):
        report = CostReport(
            {"U": 10}, 4, 1.0, 1e-6, 1e-3, input_instances=10, instance_bound=8
        )
        failures = report.failures()
        self.assertEqual(len(failures), 2)
        self.assertIn("exceeds claimed", failures[0])

    def test_should_accept_slack(self):
        report = CostReport({}, 1, 1.0, 0.0, 1e-9)
        self.assertEqual(report.failures(), [])

    def test_should_validate_run_config(self):
        with self.assertRaises(ValueError):
            RunConfig("qet", degree_bound=0)
        with self.assertRaises(ValueError):
            RunConfig("qet", backend="qsp")
        with self.assertRaises(ValueError):
            RunConfig("mqet", factored=0)
        self.assertEqual(RunConfig("approx").as_dict()["degrees"], [8, 8])


class TestPrepareOracle(TestCase):
    def test_should_expose_amplitudes(self):
        oracle = PrepareOracle(np.array([[0, 1], [1, 0]]))
        assert_allclose(oracle.amplitudes, [0, 1])
        self.assertEqual(oracle.num_qubits, 1)

    def test_should_reject_non_unitary(self):
        with self.assertRaises(NotUnitary):
            PrepareOracle(np.ones((2, 2)))

    def test_should_honour_loosened_unitarity(self):
        # given
        nearly = np.eye(2) + 1e-7 * np.array([[1, 0], [0, 0]])
        # when
        oracle = PrepareOracle(nearly, tol=Tolerances().override(unitarity=1e-3))
        # then
        assert_allclose(oracle.amplitudes, [1 + 1e-7, 0])
        with self.assertRaises(NotUnitary):
            PrepareOracle(nearly, tol=Tolerances())

    def test_should_reject_non_qubit_dimension(self):
        with self.assertRaises(DimensionMismatch):
            PrepareOracle(np.eye(3))
