"""Dense linear algebra, spectral reference oracles and postselection."""

# Standard Library
import logging
from collections.abc import Callable, Sequence

# Third Party
import numpy as np
import scipy.linalg

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.models import ComplexMatrix, StateVector, as_array
from mqet.utils import (
    DiagonalizationFailed,
    DimensionMismatch,
    NotCommuting,
    NotHermitian,
    NotNormal,
    ZeroProbability,
    log2_exact,
)

logger = logging.getLogger(__name__)


def operator_norm(matrix) -> float:
    """
    Largest singular value.

    :param matrix: square matrix
    :return: spectral norm
    """

    array = as_array(matrix)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise DimensionMismatch(f"Operator norm of a non-square array {array.shape}")
    if array.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(array)[0])


def commutator_norm(first, second) -> float:
    a, b = as_array(first), as_array(second)
    return operator_norm(a @ b - b @ a)


def hermiticity_defect(matrix) -> float:
    array = as_array(matrix)
    return operator_norm(array - array.conj().T)


def normality_defect(matrix) -> float:
    array = as_array(matrix)
    return commutator_norm(array, array.conj().T)


def eigendecompose_normal(
    matrix, tol: Tolerances | None = None
) -> tuple[np.ndarray, ComplexMatrix]:
    """
    Spectral decomposition of a normal matrix via the complex Schur form.

    For a normal matrix the Schur factor is diagonal, so the Schur vectors
    are an orthonormal eigenbasis.

    :param matrix: normal matrix
    :param tol: tolerances
    :return: (eigenvalues, unitary of eigenvectors)
    """

    tol = resolve(tol)
    array = as_array(matrix)
    defect = normality_defect(array)
    if defect > tol.normality:
        raise NotNormal(f"||MM^dagger - M^dagger M|| = {defect:.3e}")

    triangular, vectors = scipy.linalg.schur(array, output="complex")
    return np.diag(triangular).copy(), ComplexMatrix(vectors)


def _joint_eigenbasis(arrays: list[np.ndarray], hermitian: bool, tol: Tolerances):
    """Diagonalise a random combination of the family and check every member."""

    for attempt in range(tol.diagonalization_retries):
        rng = np.random.default_rng(attempt)
        weights = rng.normal(size=len(arrays))
        if not hermitian:
            weights = weights + 1j * rng.normal(size=len(arrays))
        combined = sum(w * a for w, a in zip(weights, arrays))

        if hermitian:
            _, vectors = scipy.linalg.eigh((combined + combined.conj().T) / 2)
        else:
            _, vectors = scipy.linalg.schur(combined, output="complex")

        eigenvalues = [np.diag(vectors.conj().T @ a @ vectors) for a in arrays]
        residual = max(
            operator_norm(a - (vectors * lam) @ vectors.conj().T)
            for a, lam in zip(arrays, eigenvalues)
        )
        if residual <= tol.joint_diagonalization:
            logger.debug("Joint eigenbasis found on attempt %s", attempt + 1)
            return vectors, eigenvalues

        logger.debug("Attempt %s left residual %.3e", attempt + 1, residual)

    raise DiagonalizationFailed(
        f"No shared eigenbasis after {tol.diagonalization_retries} attempts"
    )


def simultaneous_eigenbasis(
    family: Sequence, tol: Tolerances | None = None, commutation: float | None = None
) -> tuple[ComplexMatrix, list[np.ndarray]]:
    """
    Shared orthonormal eigenbasis of commuting Hermitian matrices.

    :param family: Hermitian matrices of one dimension
    :param tol: tolerances
    :param commutation: override of the pairwise commutation threshold
    :return: (V, eigenvalue vectors), A_l = V diag(lambda_l) V^dagger
    """

    tol = resolve(tol)
    commutation = tol.commutation if commutation is None else commutation
    arrays = _validated_family(family)

    for index, array in enumerate(arrays):
        defect = hermiticity_defect(array)
        if defect > tol.hermiticity:
            raise NotHermitian(f"Family member {index} is off by {defect:.3e}")
    _check_commuting(arrays, commutation)

    vectors, eigenvalues = _joint_eigenbasis(arrays, True, tol)
    return ComplexMatrix(vectors), [lam.real.copy() for lam in eigenvalues]


def matrix_function_oracle(
    family: Sequence, func: Callable[..., np.ndarray], tol: Tolerances | None = None
) -> ComplexMatrix:
    """
    Reference value of f(A_0, ..., A_r) for a commuting normal family.

    ``func`` receives one eigenvalue array per family member and is
    evaluated elementwise.

    :param family: commuting normal matrices
    :param func: vectorised function of len(family) complex arguments
    :param tol: tolerances
    :return: V f(Lambda_0, ..., Lambda_r) V^dagger
    """

    tol = resolve(tol)
    arrays = _validated_family(family)
    hermitian = all(hermiticity_defect(a) <= tol.hermiticity for a in arrays)

    if hermitian:
        vectors, eigenvalues = simultaneous_eigenbasis(arrays, tol)
        vectors = as_array(vectors)
    else:
        for index, array in enumerate(arrays):
            if normality_defect(array) > tol.normality:
                raise NotNormal(f"Family member {index} is not normal")
        _check_commuting(arrays, tol.commutation)
        vectors, eigenvalues = _joint_eigenbasis(arrays, False, tol)

    values = np.broadcast_to(
        np.asarray(func(*eigenvalues), dtype=complex), eigenvalues[0].shape
    )
    return ComplexMatrix((vectors * values) @ vectors.conj().T)


def _validated_family(family: Sequence) -> list[np.ndarray]:
    arrays = [as_array(member) for member in family]
    if not arrays:
        raise ValueError("Empty matrix family")
    if len({a.shape for a in arrays}) != 1 or arrays[0].shape[0] != arrays[0].shape[1]:
        raise DimensionMismatch("Family members must be square and of one dimension")
    return arrays


def _check_commuting(arrays: list[np.ndarray], threshold: float):
    for i in range(len(arrays)):
        for j in range(i + 1, len(arrays)):
            defect = commutator_norm(arrays[i], arrays[j])
            if defect > threshold:
                raise NotCommuting(
                    f"Members {i} and {j} have commutator norm {defect:.3e}"
                )


def postselect_zero_ancilla(
    state, ancilla_qubits: int, tol: Tolerances | None = None
) -> tuple[StateVector, float]:
    """
    Project the ancillas (most significant qubits) onto |0...0> and renormalise.

    :param state: vector of dim 2^(a+n)
    :param ancilla_qubits: a
    :param tol: tolerances
    :return: (normalised system state, success probability)
    """

    tol = resolve(tol)
    amplitudes = as_array(state)
    total_qubits = log2_exact(amplitudes.shape[0])
    if not 0 <= ancilla_qubits <= total_qubits:
        raise DimensionMismatch(
            f"{ancilla_qubits} ancillas do not fit a {total_qubits}-qubit state"
        )

    projected = amplitudes[: 2 ** (total_qubits - ancilla_qubits)]
    norm = float(np.linalg.norm(projected))
    if norm < tol.zero_probability:
        raise ZeroProbability(f"Projected norm {norm:.3e} is too small to postselect")

    return StateVector(projected / norm), norm**2
