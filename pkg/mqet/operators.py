"""
Structured unitaries.

Block-encodings built from products and linear combinations grow by whole
registers at every step, so they are kept as operator trees that act on
column blocks and are only made dense when asked.
"""

# Standard Library
import abc
from collections.abc import Sequence
from math import prod

# Third Party
import numpy as np

# MQET
from mqet.utils import DimensionMismatch, is_power_of_two

PROBE_COLUMNS = 4


class UnitaryOperator(abc.ABC):
    """A unitary acting on column vectors of length ``dim``."""

    @property
    @abc.abstractmethod
    def dim(self) -> int: ...

    @abc.abstractmethod
    def _apply(self, columns: np.ndarray, adjoint: bool) -> np.ndarray: ...

    def apply(self, columns, adjoint: bool = False) -> np.ndarray:
        """
        Apply U (or U^dagger) to a vector or to the columns of a matrix.

        :param columns: shape (dim,) or (dim, k)
        :param adjoint: apply the adjoint instead
        :return: array of the same shape
        """

        columns = np.asarray(columns, dtype=complex)
        if columns.shape[0] != self.dim:
            raise DimensionMismatch(
                f"Operator of dim {self.dim} applied to shape {columns.shape}"
            )
        if columns.ndim == 1:
            return self._apply(columns[:, None], adjoint)[:, 0]
        return self._apply(columns, adjoint)

    def to_dense(self) -> np.ndarray:
        return self.apply(np.eye(self.dim, dtype=complex))

    def top_left_block(self, size: int) -> np.ndarray:
        """Rows and columns ``0..size-1``, i.e. the all-zero ancilla block."""
        return self.apply(np.eye(self.dim, size, dtype=complex))[:size]

    def adjoint(self) -> "UnitaryOperator":
        return AdjointOperator(self)


class DenseOperator(UnitaryOperator):
    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"Not a square matrix: {matrix.shape}")
        matrix.flags.writeable = False
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def _apply(self, columns, adjoint):
        if adjoint:
            return self.matrix.conj().T @ columns
        return self.matrix @ columns

    def to_dense(self) -> np.ndarray:
        return self.matrix.copy()


class IdentityOperator(UnitaryOperator):
    def __init__(self, dim: int):
        self._dim = dim

    @property
    def dim(self) -> int:
        return self._dim

    def _apply(self, columns, adjoint):
        return columns.copy()


class AdjointOperator(UnitaryOperator):
    def __init__(self, inner: UnitaryOperator):
        self.inner = inner

    @property
    def dim(self) -> int:
        return self.inner.dim

    def _apply(self, columns, adjoint):
        return self.inner._apply(columns, not adjoint)

    def adjoint(self) -> UnitaryOperator:
        return self.inner


def act_on_registers(
    columns: np.ndarray,
    register_dims: Sequence[int],
    targets: Sequence[int],
    operator: UnitaryOperator,
    adjoint: bool = False,
) -> np.ndarray:
    """
    Apply ``operator`` to the given registers of a column block, identity elsewhere.

    Registers are listed most significant first. The target registers are
    handed to the operator in the order given.

    :param columns: shape (prod(register_dims), k)
    :param register_dims: dimension of each register
    :param targets: indices of the registers the operator acts on
    :param operator: operator of dim prod(register_dims[t] for t in targets)
    :param adjoint: apply the adjoint
    :return: new column block
    """

    k = columns.shape[1]
    rest = [i for i in range(len(register_dims)) if i not in targets]
    order = list(targets) + rest + [len(register_dims)]
    tensor = columns.reshape(tuple(register_dims) + (k,)).transpose(order)
    moved_shape = tensor.shape
    target_dim = prod(register_dims[t] for t in targets)

    out = operator._apply(tensor.reshape(target_dim, -1), adjoint)
    return out.reshape(moved_shape).transpose(np.argsort(order)).reshape(-1, k)


class PaddedOperator(UnitaryOperator):
    """``I_(2^extra) (x) inner``: identity on new most-significant ancillas."""

    def __init__(self, inner: UnitaryOperator, extra_qubits: int):
        if extra_qubits < 0:
            raise ValueError("Cannot pad with a negative number of qubits")
        self.inner = inner
        self.extra_qubits = extra_qubits

    @property
    def dim(self) -> int:
        return self.inner.dim * 2**self.extra_qubits

    def _apply(self, columns, adjoint):
        if self.extra_qubits == 0:
            return self.inner._apply(columns, adjoint)
        return act_on_registers(
            columns,
            (2**self.extra_qubits, self.inner.dim),
            (1,),
            self.inner,
            adjoint,
        )


class WiredProduct(UnitaryOperator):
    """
    ``(I_b (x) U_A)(I_a (x) U_B)`` on registers (a | b | n).

    U_B acts on (b, n) and runs first; U_A acts on (a, n).
    """

    def __init__(
        self,
        outer: UnitaryOperator,
        outer_ancillas: int,
        inner: UnitaryOperator,
        inner_ancillas: int,
        system_qubits: int,
    ):
        if outer.dim != 2 ** (outer_ancillas + system_qubits):
            raise DimensionMismatch("Outer factor does not match its register sizes")
        if inner.dim != 2 ** (inner_ancillas + system_qubits):
            raise DimensionMismatch("Inner factor does not match its register sizes")
        self.outer = outer
        self.inner = inner
        self.register_dims = (
            2**outer_ancillas,
            2**inner_ancillas,
            2**system_qubits,
        )

    @property
    def dim(self) -> int:
        return prod(self.register_dims)

    def _apply(self, columns, adjoint):
        dims = self.register_dims
        if adjoint:
            columns = act_on_registers(columns, dims, (0, 2), self.outer, True)
            return act_on_registers(columns, dims, (1, 2), self.inner, True)
        columns = act_on_registers(columns, dims, (1, 2), self.inner)
        return act_on_registers(columns, dims, (0, 2), self.outer)


class SelectPrepare(UnitaryOperator):
    """
    ``(V^dagger (x) I) . sum_j |j><j| (x) phase_j U_j . (V (x) I)``.

    All terms share one dimension. The index register is most significant.
    """

    def __init__(
        self,
        prepare: np.ndarray,
        terms: Sequence[UnitaryOperator],
        phases: Sequence[complex],
    ):
        prepare = np.asarray(prepare, dtype=complex)
        if prepare.shape != (len(terms), len(terms)):
            raise DimensionMismatch("Prepare oracle does not match the term count")
        if not is_power_of_two(len(terms)):
            raise DimensionMismatch("Term count must be a power of 2")
        if len({term.dim for term in terms}) != 1:
            raise DimensionMismatch("All terms must share one dimension")
        self.prepare = prepare
        self.terms = tuple(terms)
        self.phases = np.asarray(phases, dtype=complex)

    @property
    def dim(self) -> int:
        return len(self.terms) * self.terms[0].dim

    def _apply(self, columns, adjoint):
        k = columns.shape[1]
        tensor = columns.reshape(len(self.terms), self.terms[0].dim, k)
        tensor = np.einsum("ij,jmk->imk", self.prepare, tensor)

        selected = np.empty_like(tensor)
        for j, term in enumerate(self.terms):
            phase = self.phases[j].conjugate() if adjoint else self.phases[j]
            selected[j] = phase * term._apply(tensor[j], adjoint)

        out = np.einsum("ji,jmk->imk", self.prepare.conj(), selected)
        return out.reshape(-1, k)


def prepare_unitary(amplitudes: Sequence[float]) -> np.ndarray:
    """
    Real orthogonal V with ``V[:, 0] = amplitudes`` (a unit vector).

    Completed by a full QR factorisation, with the sign fixed so the first
    column is reproduced exactly.

    :param amplitudes: non-negative unit vector
    :return: orthogonal matrix
    """

    amplitudes = np.asarray(amplitudes, dtype=float)
    size = len(amplitudes)
    seed = np.identity(size)
    seed[:, 0] = amplitudes
    q, _ = np.linalg.qr(seed, mode="complete")
    if np.dot(q[:, 0], amplitudes) < 0:
        q = -q
    if np.linalg.norm(q[:, 0] - amplitudes) > 1e-12:
        raise ValueError("QR completion failed to reproduce the prepare column")
    return q


def permute_qubits(matrix: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """
    Relabel the qubits of a dense operator.

    New qubit ``i`` is old qubit ``order[i]``; qubit 0 is most significant.
    """

    matrix = np.asarray(matrix, dtype=complex)
    n = len(order)
    tensor = matrix.reshape((2,) * (2 * n))
    axes = list(order) + [n + q for q in order]
    return tensor.transpose(axes).reshape(matrix.shape)


def is_unitary(operator: UnitaryOperator, tol: float, dense_limit: int = 1024) -> bool:
    """
    Unitarity check, exact up to ``dense_limit`` and probed above it.

    :param operator: operator to check
    :param tol: spectral-norm tolerance on U^dagger U - I
    :param dense_limit: largest dim checked on the dense matrix
    :return: whether the check passed
    """

    if operator.dim <= dense_limit:
        matrix = operator.to_dense()
        gram = matrix.conj().T @ matrix
        return bool(np.linalg.norm(gram - np.eye(operator.dim), 2) <= tol)

    rng = np.random.default_rng(0)
    probes = rng.normal(size=(operator.dim, PROBE_COLUMNS)) + 1j * rng.normal(
        size=(operator.dim, PROBE_COLUMNS)
    )
    images = operator.apply(probes)
    scale = np.linalg.norm(probes, 2) ** 2
    defect = images.conj().T @ images - probes.conj().T @ probes
    return bool(np.linalg.norm(defect, 2) <= tol * scale)
