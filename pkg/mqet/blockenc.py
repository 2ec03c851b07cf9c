"""Block-encoding algebra: extraction, dilation, adjoint, product and LCU."""

# Standard Library
import logging
from collections.abc import Sequence

# Third Party
import numpy as np
import scipy.linalg

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.matrices import operator_norm
from mqet.models import BlockEncoding, ComplexMatrix, CostLedger, as_array
from mqet.operators import (
    DenseOperator,
    IdentityOperator,
    PaddedOperator,
    SelectPrepare,
    WiredProduct,
    prepare_unitary,
)
from mqet.utils import (
    DimensionMismatch,
    EmptyCombination,
    NormTooLarge,
    ceil_log2,
    log2_exact,
)

logger = logging.getLogger(__name__)

DEFECT_FLOOR = 1e-14


def extract_block(be: BlockEncoding) -> ComplexMatrix:
    """alpha times the |0^a> block of the unitary."""
    return ComplexMatrix(be.alpha * be.block())


def verify_be(be: BlockEncoding, target) -> float:
    """
    Distance between the encoded matrix and a target.

    The caller compares the result with ``be.epsilon``.

    :param be: block-encoding
    :param target: intended matrix of dim 2^n
    :return: ||target - extract_block(be)||
    """

    target = as_array(target)
    if target.shape != (be.system_dim, be.system_dim):
        raise DimensionMismatch(
            f"Target of shape {target.shape} for a {be.system_qubits}-qubit encoding"
        )
    return operator_norm(target - as_array(extract_block(be)))


def dilate(
    matrix, alpha: float = 1.0, oracle: str | None = "U", tol: Tolerances | None = None
) -> BlockEncoding:
    """
    Exact one-ancilla unitary completion of A / alpha.

    The defect blocks are taken from one SVD of X = A / alpha, so
    X^dagger sqrt(I - X X^dagger) = sqrt(I - X^dagger X) X^dagger holds
    to rounding even when singular values sit at 1.

    :param matrix: A, dim 2^n
    :param alpha: subnormalisation, ||A / alpha|| <= 1
    :param oracle: ledger name charged once per use, None for a free encoding
    :param tol: tolerances
    :return: BE_{alpha,1}(A; 0)
    """

    tol = resolve(tol)
    if not alpha > 0:
        raise ValueError(f"Subnormalisation must be positive, got {alpha}")

    scaled = as_array(matrix) / alpha
    system_qubits = log2_exact(scaled.shape[0])
    left, singular, right_h = scipy.linalg.svd(scaled)
    if singular[0] > 1 + tol.norm_slack:
        raise NormTooLarge(f"||A / alpha|| = {singular[0]:.15g} exceeds 1")

    # rounding noise at sigma = 1 would otherwise become sqrt(eps) defects
    defect_squared = 1 - singular**2
    defect_squared[defect_squared < DEFECT_FLOOR] = 0
    defect = np.sqrt(defect_squared)
    right = right_h.conj().T
    unitary = np.block(
        [
            [scaled, (left * defect) @ left.conj().T],
            [(right * defect) @ right.conj().T, -scaled.conj().T],
        ]
    )

    operator = DenseOperator(unitary)
    ledger = CostLedger.of({oracle: 1} if oracle else {}, 1)
    return BlockEncoding(
        operator, alpha, 1, 0.0, system_qubits, ledger, tol=tol.for_dilations()
    )


def unitary_be(
    matrix, oracle: str | None = None, tol: Tolerances | None = None
) -> BlockEncoding:
    """A unitary as its own block-encoding, no ancillas."""

    operator = DenseOperator(matrix)
    ledger = CostLedger.of({oracle: 1} if oracle else {})
    system_qubits = log2_exact(operator.dim)
    return BlockEncoding(operator, 1.0, 0, 0.0, system_qubits, ledger, tol=tol)


def adjoint(be: BlockEncoding, tol: Tolerances | None = None) -> BlockEncoding:
    """Encoding of the adjoint block, same parameters, same ledger names."""

    return BlockEncoding(
        be.unitary.adjoint(),
        be.alpha,
        be.ancillas,
        be.epsilon,
        be.system_qubits,
        be.ledger,
        tol=tol,
    )


def padded(
    be: BlockEncoding, ancillas: int, tol: Tolerances | None = None
) -> BlockEncoding:
    """Widen the ancilla register, identity on the new qubits."""

    extra = ancillas - be.ancillas
    if extra < 0:
        raise ValueError("Cannot remove ancillas by padding")
    if extra == 0:
        return be
    return BlockEncoding(
        PaddedOperator(be.unitary, extra),
        be.alpha,
        ancillas,
        be.epsilon,
        be.system_qubits,
        be.ledger,
        tol=tol,
    )


def rescaled(
    be: BlockEncoding, factor: float, tol: Tolerances | None = None
) -> BlockEncoding:
    """Same unitary read as an encoding of factor * A."""

    if not factor > 0:
        raise ValueError("Rescaling factor must be positive")
    return BlockEncoding(
        be.unitary,
        be.alpha * factor,
        be.ancillas,
        be.epsilon * factor,
        be.system_qubits,
        be.ledger,
        tol=tol,
    )


def product(
    first: BlockEncoding, second: BlockEncoding, tol: Tolerances | None = None
) -> BlockEncoding:
    """
    Encoding of A B from encodings of A and B.

    :param first: BE_{alpha,a}(A; eps_A)
    :param second: BE_{beta,b}(B; eps_B)
    :return: BE_{alpha beta, a+b}(AB; alpha eps_B + beta eps_A)
    """

    if first.system_qubits != second.system_qubits:
        raise DimensionMismatch(
            f"Product of {first.system_qubits}- and {second.system_qubits}-qubit encodings"
        )

    wiring = WiredProduct(
        first.unitary,
        first.ancillas,
        second.unitary,
        second.ancillas,
        first.system_qubits,
    )
    return BlockEncoding(
        wiring,
        first.alpha * second.alpha,
        first.ancillas + second.ancillas,
        first.alpha * second.epsilon + second.alpha * first.epsilon,
        first.system_qubits,
        first.ledger + second.ledger,
        tol=tol,
    )


def product_chain(
    factors: Sequence[BlockEncoding], tol: Tolerances | None = None
) -> BlockEncoding:
    """Left-to-right product of several encodings."""

    if not factors:
        raise EmptyCombination("Product of no encodings")
    result = factors[0]
    for factor in factors[1:]:
        result = product(result, factor, tol)
    return result


def lcu(
    terms: Sequence[BlockEncoding],
    coefficients: Sequence[complex],
    min_index_qubits: int = 1,
    tol: Tolerances | None = None,
) -> BlockEncoding:
    """
    Linear combination of block-encodings.

    Magnitudes |c_j alpha_j| go to the prepare oracle, phases of c_j to the
    select oracle. Zero coefficients are dropped before padding.

    :param terms: encodings on one system register
    :param coefficients: complex weights, one per term
    :param min_index_qubits: lower bound on the index register width
    :return: encoding of sum c_j A_j with alpha = sum |c_j alpha_j|
    """

    if len(terms) != len(coefficients):
        raise DimensionMismatch("One coefficient per term is required")
    if not terms:
        raise EmptyCombination("Linear combination of no terms")
    if len({term.system_qubits for term in terms}) != 1:
        raise DimensionMismatch("LCU terms act on different system registers")

    kept = [(t, complex(c)) for t, c in zip(terms, coefficients) if c != 0]
    if not kept:
        raise EmptyCombination("All LCU coefficients are zero")

    weights = np.array([abs(c) * t.alpha for t, c in kept])
    alpha = float(np.sum(weights))
    index_qubits = max(min_index_qubits, ceil_log2(len(kept)))
    width = 2**index_qubits
    term_ancillas = max(t.ancillas for t, _ in kept)

    operators = [padded(t, term_ancillas, tol).unitary for t, _ in kept]
    operators += [IdentityOperator(operators[0].dim)] * (width - len(kept))
    phases = [c / abs(c) for _, c in kept] + [1.0] * (width - len(kept))
    amplitudes = np.zeros(width)
    amplitudes[: len(kept)] = np.sqrt(weights / alpha)

    logger.debug(
        "LCU of %s terms on %s index qubits, alpha=%.6g", len(kept), index_qubits, alpha
    )

    ledger = CostLedger()
    for term, _ in kept:
        ledger = ledger + term.ledger

    return BlockEncoding(
        SelectPrepare(prepare_unitary(amplitudes), operators, phases),
        alpha,
        term_ancillas + index_qubits,
        float(sum(abs(c) * t.epsilon for t, c in kept)),
        kept[0][0].system_qubits,
        ledger,
        tol=tol,
    )
