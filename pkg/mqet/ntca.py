"""
Nonlinear transformation of complex amplitudes.

From a prepare oracle U|0> = sum_k c_k |k> we build block-encodings of
diag(Re c_k) and diag(Im c_k), then run the bivariate transform on the pair
to reach a state proportional to sum_k F(Re c_k, Im c_k) |k>.

Registers are (top | middle | flag): top holds |k>, middle is prepared by U
and flag is one qubit. All qubit orders put the most significant first.
"""

# Standard Library
import dataclasses
import logging
from typing import Literal

# Third Party
import numpy as np

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.models import (
    BlockEncoding,
    CostLedger,
    CostReport,
    PolyMV,
    PrepareOracle,
    StateVector,
    as_array,
)
from mqet.operators import DenseOperator, permute_qubits
from mqet.qet import mqet, run_on_state
from mqet.utils import DimensionMismatch, ZeroProbability

logger = logging.getLogger(__name__)

Variant = Literal["plain", "prime"]

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_Z = np.diag([1, -1]).astype(complex)
PHASE_S = np.diag([1, 1j])
PROJECT_0 = np.diag([1, 0]).astype(complex)
PROJECT_1 = np.diag([0, 1]).astype(complex)

# W and W^dagger use U twice each, G holds W twice, G~ holds G and G^dagger
ORACLE_USES_PER_ENCODING = 12


def _oracle(prepare, tol: Tolerances | None = None) -> PrepareOracle:
    if isinstance(prepare, PrepareOracle):
        return prepare
    return PrepareOracle(prepare, tol=tol)


def _on_flag(gate: np.ndarray, size: int) -> np.ndarray:
    """``gate`` on the flag qubit, identity on top and middle."""
    return np.kron(np.eye(size * size), gate)


def _register_compare(size: int) -> np.ndarray:
    """Flag-controlled CNOT fan: |k>|j>|1> -> |k>|j xor k>|1>."""

    dim = size * size * 2
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(size):
        for j in range(size):
            for flag in (0, 1):
                target = j ^ k if flag else j
                out[(k * size + target) * 2 + flag, (k * size + j) * 2 + flag] = 1
    return out


def build_W(prepare, variant: Variant = "plain") -> np.ndarray:
    """
    W|k>|0>|0> = |k>(|v>|+> + |k>|->) / sqrt(2); the prime variant puts a
    phase i on the |k>|-> branch.

    :param prepare: prepare oracle U on n qubits
    :param variant: "plain" or "prime" (S before the final Hadamard)
    :return: unitary on 2n + 1 qubits
    """

    oracle = _oracle(prepare)
    u = as_array(oracle.unitary)
    size = u.shape[0]
    identity = np.eye(size)

    prepare_middle = np.kron(identity, np.kron(u, np.eye(2)))
    hadamard = _on_flag(HADAMARD, size)
    unprepare = np.kron(
        identity, np.kron(identity, PROJECT_0) + np.kron(u.conj().T, PROJECT_1)
    )

    out = unprepare @ hadamard @ prepare_middle
    out = _register_compare(size) @ out
    if variant == "prime":
        out = _on_flag(PHASE_S, size) @ out
    elif variant != "plain":
        raise ValueError(f"Unknown variant {variant!r}")
    return hadamard @ out


def build_G(prepare, variant: Variant = "plain") -> np.ndarray:
    """
    G = W S_0 W^dagger Z_flag with S_0 = I - 2|0..0><0..0| on middle and flag.

    In the |k> sector G has eigenvalues -Re c_k +- i sqrt(1 - (Re c_k)^2)
    (Im c_k for the prime variant).
    """

    oracle = _oracle(prepare)
    size = 2**oracle.num_qubits
    w = build_W(oracle, variant)

    zero = np.zeros((2 * size, 2 * size))
    zero[0, 0] = 1
    reflection = np.kron(np.eye(size), np.eye(2 * size) - 2 * zero)
    return w @ reflection @ w.conj().T @ _on_flag(PAULI_Z, size)


def build_G_tilde(prepare, variant: Variant = "plain") -> np.ndarray:
    """
    (H (x) I)(|0><0| (x) G + |1><1| (x) G^dagger)(H (x) I), control qubit first.

    Its control-zero block is (G + G^dagger) / 2.
    """

    g = build_G(prepare, variant)
    dim = g.shape[0]
    hadamard = np.kron(HADAMARD, np.eye(dim))
    select = np.kron(PROJECT_0, g) + np.kron(PROJECT_1, g.conj().T)
    return hadamard @ select @ hadamard


def amplitude_be(
    prepare, part: Literal["re", "im"] = "re", tol: Tolerances | None = None
) -> BlockEncoding:
    """
    Block-encoding of diag(Re c_k) or diag(Im c_k).

    (I (x) W^dagger) G~ (I (x) W) has block -Re c_k under the reflection sign
    used by build_G, so the encoding carries a global phase of -1. Qubits are
    reordered to (control, middle, flag | top) so the ancillas lead.

    :param prepare: prepare oracle on n qubits
    :param part: "re" or "im"
    :param tol: tolerances
    :return: BE_{1, n+2}(diag(part of c); 0)
    """

    if part not in ("re", "im"):
        raise ValueError(f"Unknown part {part!r}")
    oracle = _oracle(prepare, tol)
    n = oracle.num_qubits
    variant = "plain" if part == "re" else "prime"

    w = np.kron(np.eye(2), build_W(oracle, variant))
    matrix = -(w.conj().T @ build_G_tilde(oracle, variant) @ w)

    order = [0] + [1 + n + j for j in range(n)] + [1 + 2 * n]
    order += [1 + j for j in range(n)]
    unitary = permute_qubits(matrix, order)

    ledger = CostLedger.of({oracle.oracle: ORACLE_USES_PER_ENCODING})
    logger.debug("Built %s-part amplitude encoding on %s qubits", part, n)
    return BlockEncoding(DenseOperator(unitary), 1.0, n + 2, 0.0, n, ledger, tol=tol)


def brute_force_amplitudes(prepare, f: PolyMV) -> np.ndarray:
    """F(Re c_k, Im c_k) evaluated directly on the prepared amplitudes."""

    amplitudes = _oracle(prepare).amplitudes
    return np.asarray(f(amplitudes.real, amplitudes.imag), dtype=complex)


def ntca_transform(
    prepare, f: PolyMV, degree_bound: int, tol: Tolerances | None = None
) -> tuple[StateVector, CostReport]:
    """
    Prepare a state proportional to sum_k F(c_k) |k>.

    The transform is applied to the uniform superposition, so the success
    probability is sum_k |F(c_k)|^2 / (N subnorm^2).

    :param prepare: prepare oracle on n qubits
    :param f: bivariate polynomial, |F| <= 1 on the square
    :param degree_bound: D, larger than both degrees of F
    :param tol: tolerances
    :return: (postselected state, cost report with success statistics)
    """

    tol = resolve(tol)
    oracle = _oracle(prepare, tol)
    if f.num_vars != 2:
        raise DimensionMismatch("The amplitude transform takes a bivariate polynomial")

    target = brute_force_amplitudes(oracle, f)
    weight = float(np.sum(np.abs(target) ** 2))
    if weight < tol.zero_probability:
        raise ZeroProbability("F vanishes on every prepared amplitude")

    logger.info("Transforming %s amplitudes with D=%s", len(target), degree_bound)
    pair = [amplitude_be(oracle, "re", tol), amplitude_be(oracle, "im", tol)]
    result = mqet(pair, f, degree_bound, tol)

    size = len(target)
    state, probability = run_on_state(result, StateVector.uniform(size), tol)

    expected = target / np.sqrt(weight)
    state_error = float(np.linalg.norm(as_array(state) - expected))
    report = dataclasses.replace(
        result.report,
        extra={
            "success_probability": probability,
            "expected_repetitions": 1 / probability,
            "amplitude_factor": float(np.sqrt(size / weight)),
            "state_error": state_error,
        },
    )
    logger.info(
        "Amplitude transform succeeded with probability %.3e, state error %.2e",
        probability,
        state_error,
    )
    return state, report
