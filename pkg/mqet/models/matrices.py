"""Matrix and state value types."""

# Standard Library
from dataclasses import InitVar, dataclass

# Third Party
import numpy as np

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.utils import (
    DimensionMismatch,
    NotUnitary,
    is_power_of_two,
    log2_exact,
    require_finite,
)

__all__ = ["ComplexMatrix", "PrepareOracle", "StateVector", "as_array"]


def _frozen(values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=complex, copy=True)
    if array.ndim != ndim:
        raise DimensionMismatch(f"Expected a {ndim}-D array, got shape {array.shape}")
    require_finite(array, "entry")
    array.flags.writeable = False
    return array


def as_array(value) -> np.ndarray:
    """Complex ndarray view of a ComplexMatrix, StateVector or array-like."""
    return np.asarray(value, dtype=complex)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """
    Square complex matrix. Immutable; the entries array is read-only.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries, 2)
        if entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"Matrix is not square: {entries.shape}")
        object.__setattr__(self, "entries", entries)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    @classmethod
    def identity(cls, dim: int) -> "ComplexMatrix":
        return cls(np.eye(dim, dtype=complex))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def is_operator(self) -> bool:
        """Whether the dimension is a power of two, as a qubit register needs."""
        return is_power_of_two(self.dim)

    @property
    def num_qubits(self) -> int:
        return log2_exact(self.dim)

    def adjoint(self) -> "ComplexMatrix":
        return ComplexMatrix(self.entries.conj().T)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return StateVector(self.entries @ other.amplitudes)
        return ComplexMatrix(self.entries @ as_array(other))

    def __add__(self, other):
        return ComplexMatrix(self.entries + as_array(other))

    def __sub__(self, other):
        return ComplexMatrix(self.entries - as_array(other))

    def __mul__(self, scalar: complex):
        return ComplexMatrix(self.entries * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"ComplexMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Complex amplitude vector, not necessarily normalised.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes, 1))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.amplitudes
        return self.amplitudes.astype(dtype)

    @classmethod
    def basis(cls, dim: int, index: int = 0) -> "StateVector":
        amplitudes = np.zeros(dim, dtype=complex)
        amplitudes[index] = 1
        return cls(amplitudes)

    @classmethod
    def uniform(cls, dim: int) -> "StateVector":
        return cls(np.full(dim, 1 / np.sqrt(dim), dtype=complex))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        norm = self.norm
        if norm == 0:
            raise ValueError("Cannot normalise the zero vector")
        return StateVector(self.amplitudes / norm)

    def __repr__(self):
        return f"StateVector(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class PrepareOracle:
    """
    A state-preparation unitary U with U|0...0> = sum_k c_k |k>.
    """

    unitary: ComplexMatrix
    oracle: str = "U_prep"
    tol: InitVar[Tolerances | None] = None

    def __post_init__(self, tol):
        unitary = self.unitary
        if not isinstance(unitary, ComplexMatrix):
            unitary = ComplexMatrix(unitary)
        object.__setattr__(self, "unitary", unitary)

        defect = np.linalg.norm(
            unitary.entries.conj().T @ unitary.entries - np.eye(unitary.dim), 2
        )
        if defect > resolve(tol).unitarity:
            raise NotUnitary(f"Prepare oracle is not unitary, defect {defect:.3e}")
        log2_exact(unitary.dim)

    @property
    def num_qubits(self) -> int:
        return self.unitary.num_qubits

    @property
    def amplitudes(self) -> np.ndarray:
        return self.unitary.entries[:, 0].copy()
