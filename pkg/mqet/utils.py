"""Exceptions and small numeric helpers."""

# Standard Library
import math
from collections.abc import Iterable

# Third Party
import numpy as np


class MqetError(Exception):
    """
    A precondition of an operation does not hold.
    """

    def __init__(self, msg):
        Exception.__init__(self, msg)


class NotNormal(MqetError):
    """NotNormal"""


class NotHermitian(MqetError):
    """NotHermitian"""


class NotCommuting(MqetError):
    """NotCommuting"""


class NotUnitary(MqetError):
    """NotUnitary"""


class NormTooLarge(MqetError):
    """NormTooLarge"""


class DimensionMismatch(MqetError):
    """DimensionMismatch"""


class ZeroProbability(MqetError):
    """ZeroProbability"""


class PolyNotBounded(MqetError):
    """PolyNotBounded"""


class SpectrumOutOfRange(MqetError):
    """SpectrumOutOfRange"""


class DuplicateNodes(MqetError):
    """DuplicateNodes"""


class DegreeOverflow(MqetError):
    """DegreeOverflow"""


class NonFiniteValue(MqetError):
    """NonFiniteValue"""


class EmptyCombination(MqetError):
    """EmptyCombination"""


class NotExtensible(MqetError):
    """NotExtensible"""


class DiagonalizationFailed(MqetError):
    """DiagonalizationFailed"""


class UnknownBuiltin(MqetError):
    """UnknownBuiltin"""


class ContractViolation(MqetError):
    """
    A measured quantity broke a claimed bound.
    """

    def __init__(self, msg, failures=()):
        MqetError.__init__(self, msg)
        self.failures = list(failures)


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def log2_exact(value: int) -> int:
    """
    Number of qubits for a power-of-two dimension.

    :param value: dimension
    :return: log2 of the dimension
    """

    if not is_power_of_two(value):
        raise DimensionMismatch(f"Dimension {value} is not a power of 2")
    return value.bit_length() - 1


def ceil_log2(value: int) -> int:
    if value < 1:
        raise ValueError("Need a positive count")
    return (value - 1).bit_length()


def complex_fsum(values: Iterable[complex]) -> complex:
    """
    Compensated sum of complex values, real and imaginary parts separately.
    """

    values = list(values)
    return complex(
        math.fsum(v.real for v in values), math.fsum(v.imag for v in values)
    )


def exact_dot(weights: np.ndarray, values: np.ndarray, threshold: int = 64):
    """
    Dot product along the first axis, compensated once it is longer than threshold.

    :param weights: shape (L,)
    :param values: shape (L, ...)
    :param threshold: lengths above this use math.fsum per entry
    :return: contracted array of shape values.shape[1:]
    """

    weights = np.asarray(weights)
    values = np.asarray(values, dtype=complex)
    if len(weights) <= threshold:
        return np.tensordot(weights, values, axes=(0, 0))

    terms = weights.reshape((-1,) + (1,) * (values.ndim - 1)) * values
    flat = terms.reshape(len(weights), -1)
    out = np.array([complex_fsum(flat[:, j]) for j in range(flat.shape[1])])
    return out.reshape(values.shape[1:])


def require_finite(values, what: str = "value"):
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(f"Non-finite {what}")
