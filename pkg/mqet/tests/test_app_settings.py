# Standard Library
import os
import tempfile
from unittest import TestCase

# MQET
from mqet.app_settings import TOLERANCES, Tolerances, load_tolerances, resolve


class TestTolerances(TestCase):
    def test_should_have_defaults(self):
        tol = Tolerances()
        self.assertEqual(tol.unitarity, 1e-10)
        self.assertEqual(tol.workers, 1)

    def test_should_cast_overrides(self):
        # when
        tol = Tolerances().override(unitarity="1e-6", workers="4")
        # then
        self.assertEqual(tol.unitarity, 1e-6)
        self.assertEqual(tol.workers, 4)
        self.assertIsInstance(tol.workers, int)

    def test_should_not_touch_original(self):
        original = Tolerances()
        original.override(rank_ratio=0.5)
        self.assertEqual(original.rank_ratio, 1e-9)

    def test_should_reject_unknown_field(self):
        with self.assertRaises(ValueError):
            Tolerances().override(nope=1)

    def test_should_reject_negative_values(self):
        with self.assertRaises(ValueError):
            Tolerances(normality=-1.0)
        with self.assertRaises(ValueError):
            Tolerances(workers=0)

    def test_should_export_dict(self):
        self.assertEqual(Tolerances().as_dict()["node_gap"], 1e-10)


class TestLoadTolerances(TestCase):
    def test_should_default_without_path(self):
        self.assertEqual(load_tolerances(None), Tolerances())

    def test_should_load_yaml(self):
        # given
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "settings.yaml")
            with open(path, "w", encoding="utf-8") as stream:
                stream.write("unitarity: 1.0e-7\ndiagonalization_retries: 9\n")
            # when
            tol = load_tolerances(path)
        # then
        self.assertEqual(tol.unitarity, 1e-7)
        self.assertEqual(tol.diagonalization_retries, 9)

    def test_should_accept_empty_file(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "settings.yaml")
            open(path, "w", encoding="utf-8").close()
            self.assertEqual(load_tolerances(path), Tolerances())

    def test_should_reject_non_mapping(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "settings.yaml")
            with open(path, "w", encoding="utf-8") as stream:
                stream.write("- 1\n- 2\n")
            with self.assertRaises(ValueError):
                load_tolerances(path)


class TestResolve(TestCase):
    def test_should_fall_back_to_module_tolerances(self):
        self.assertIs(resolve(None), TOLERANCES)

    def test_should_pass_explicit_tolerances(self):
        tol = Tolerances(unitarity=1e-3)
        self.assertIs(resolve(tol), tol)
