# Standard Library
import math
from unittest import TestCase

# Third Party
import numpy as np
from numpy.testing import assert_allclose

# MQET
from mqet.approx import (
    builtin_function,
    builtin_functions,
    chebyshev_extrema,
    jackson_bound_1d,
    jackson_bound_2d,
    jackson_bound_dd,
    modulus_of_continuity,
    refinement_factor,
    rivlin_jackson_bound,
    sup_norm_bound,
    sup_norm_estimate,
    tensor_interpolate,
)
from mqet.chebpoly import chebyshev_integer_coefficients
from mqet.fixtures import rng_for
from mqet.models import FunctionSpec, PolyMV
from mqet.utils import DimensionMismatch, NonFiniteValue, NotExtensible, UnknownBuiltin


def max_error(f: FunctionSpec, p: PolyMV, points: int = 100) -> float:
    grid = np.meshgrid(*[np.linspace(-1, 1, points)] * f.arity, indexing="ij")
    return float(np.max(np.abs(f(*grid) - p(*grid))))


class TestTensorInterpolate(TestCase):
    def test_should_reproduce_polynomial(self):
        # given
        rng = rng_for(51)
        original = PolyMV(rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5)))
        # when
        p = tensor_interpolate(FunctionSpec.from_polynomial(original), (4, 5))
        # then
        assert_allclose(p.coefficients, original.coefficients, atol=1e-10)

    def test_should_interpolate_constant(self):
        # given
        f = FunctionSpec(2, lambda x, y: 3 + 0 * x)
        # when
        p = tensor_interpolate(f, (3, 3))
        # then
        expected = np.zeros((3, 3))
        expected[0, 0] = 3
        assert_allclose(p.coefficients, expected, atol=1e-12)

    def test_should_stay_within_jackson_bound(self):
        f = builtin_function("exp")
        for n in (8, 12, 16):
            p = tensor_interpolate(f, (n, n))
            bound = jackson_bound_2d(f.smoothness, f.derivative_bound, n, n)
            self.assertLessEqual(max_error(f, p), bound)

    def test_should_converge_on_smooth_function(self):
        f = builtin_function("exp")
        self.assertLess(max_error(f, tensor_interpolate(f, (16, 16))), 1e-9)

    def test_should_interpolate_three_variables(self):
        f = FunctionSpec(3, lambda x, y, z: x * y**2 - z)
        p = tensor_interpolate(f, (2, 3, 2))
        self.assertLess(max_error(f, p, 20), 1e-12)

    def test_should_reject_wrong_arity(self):
        with self.assertRaises(DimensionMismatch):
            tensor_interpolate(builtin_function("exp"), (4, 4, 4))

    def test_should_reject_non_finite_values(self):
        f = FunctionSpec(2, lambda x, y: np.full_like(x, np.nan))
        with self.assertRaises(NonFiniteValue):
            tensor_interpolate(f, (3, 3))

    def test_should_reject_values_above_gamma(self):
        f = FunctionSpec(2, lambda x, y: 2 + 0 * x, gamma=1.0)
        with self.assertRaises(NotExtensible):
            tensor_interpolate(f, (3, 3))

    def test_should_accept_values_within_gamma(self):
        p = tensor_interpolate(builtin_function("rational"), (6, 6))
        self.assertEqual(p.degree_bounds, (6, 6))


class TestJacksonBounds(TestCase):
    def test_should_compute_square_bound(self):
        expected = (math.pi / 2) ** 2 / 2 * 8 * 3 / 36
        self.assertAlmostEqual(jackson_bound_2d(2, 1.0, 8, 8), expected)

    def test_should_agree_between_square_and_cube(self):
        for k, n1, n2 in ((0, 4, 8), (2, 8, 8), (3, 5, 16)):
            self.assertAlmostEqual(
                jackson_bound_dd(k, 2.0, (n1, n2)), jackson_bound_2d(k, 2.0, n1, n2)
            )

    def test_should_sum_over_cube_axes(self):
        self.assertAlmostEqual(jackson_bound_dd(0, 1.0, (2, 2, 2)), 6.0)

    def test_should_compute_interval_bound(self):
        self.assertAlmostEqual(jackson_bound_1d(0, 1.5, 4), 1.5)
        self.assertAlmostEqual(jackson_bound_1d(1, 1.0, 4), math.pi / 2 / 5)

    def test_should_reject_bad_orders(self):
        with self.assertRaises(ValueError):
            jackson_bound_1d(4, 1.0, 4)
        with self.assertRaises(ValueError):
            jackson_bound_2d(9, 1.0, 8, 8)
        with self.assertRaises(ValueError):
            jackson_bound_dd(0, 1.0, (8,))


class TestModulusOfContinuity(TestCase):
    def test_should_measure_linear_functions(self):
        identity = FunctionSpec(1, lambda x: x)
        double = FunctionSpec(1, lambda x: 2 * x)
        self.assertAlmostEqual(modulus_of_continuity(identity, 0.1), 0.1, delta=1e-3)
        self.assertAlmostEqual(modulus_of_continuity(double, 0.1), 0.2, delta=1e-3)

    def test_should_not_exceed_lipschitz_bound(self):
        f = FunctionSpec(1, lambda x: np.abs(x))
        self.assertLessEqual(modulus_of_continuity(f, 0.1), 0.1)

    def test_should_give_rivlin_bound(self):
        f = FunctionSpec(1, lambda x: x)
        self.assertAlmostEqual(rivlin_jackson_bound(f, 10), 0.6, delta=1e-2)

    def test_should_reject_bad_inputs(self):
        with self.assertRaises(ValueError):
            modulus_of_continuity(FunctionSpec(1, lambda x: x), 0.0)
        with self.assertRaises(DimensionMismatch):
            modulus_of_continuity(builtin_function("exp"), 0.1)


class TestSupNorm(TestCase):
    def test_should_include_endpoints(self):
        assert_allclose(chebyshev_extrema(2), [1, -1])

    def test_should_find_chebyshev_maximum(self):
        # given
        p = PolyMV([float(c) for c in chebyshev_integer_coefficients(5)])
        # when / then
        self.assertAlmostEqual(sup_norm_estimate(p), 1.0)
        self.assertGreater(refinement_factor(p), 1.0)
        self.assertGreaterEqual(sup_norm_bound(p), 1.0)

    def test_should_bound_product_polynomial(self):
        t2 = np.array(chebyshev_integer_coefficients(2), dtype=float)
        t3 = np.array(chebyshev_integer_coefficients(3), dtype=float)
        p = PolyMV(np.outer(t2, t3))
        self.assertAlmostEqual(sup_norm_estimate(p, 64), 1.0)

    def test_should_raise_small_grids(self):
        p = PolyMV(np.ones((5, 5)))
        self.assertAlmostEqual(sup_norm_estimate(p, 3), 25.0)


class TestBuiltins(TestCase):
    def test_should_list_builtins(self):
        self.assertEqual(
            set(builtin_functions()), {"exp", "trig", "quadratic", "rational"}
        )

    def test_should_reject_unknown_builtin(self):
        with self.assertRaises(UnknownBuiltin):
            builtin_function("nope")
