"""
Eigenvalue transforms of normal matrices and commuting Hermitian families.

Every polynomial-of-a-block step uses the ideal dilation backend: p is
applied to the eigenvalues of the extracted Hermitian block and the result
is dilated, while the ledger is charged what a QSP circuit would use.
"""

# Standard Library
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

# Third Party
import numpy as np
import scipy.linalg
import scipy.special

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.approx import sup_norm_estimate
from mqet.blockenc import (
    adjoint,
    dilate,
    extract_block,
    lcu,
    padded,
    product,
    product_chain,
    unitary_be,
)
from mqet.chebpoly import cheb_T
from mqet.decomp import (
    decompose_bivariate,
    decompose_multivariate,
    index_qubits,
    instance_bound_bivariate,
    instance_bound_multivariate,
    normalize,
)
from mqet.matrices import (
    commutator_norm,
    hermiticity_defect,
    matrix_function_oracle,
    normality_defect,
    operator_norm,
    postselect_zero_ancilla,
)
from mqet.models import (
    BlockEncoding,
    ChebSeries1,
    CostReport,
    Poly1,
    PolyMV,
    QetResult,
    StateVector,
    as_array,
)
from mqet.utils import (
    DimensionMismatch,
    EmptyCombination,
    NormTooLarge,
    NotCommuting,
    NotHermitian,
    NotNormal,
    PolyNotBounded,
    SpectrumOutOfRange,
)

logger = logging.getLogger(__name__)

LIPSCHITZ_MARGIN = 1.01
LIPSCHITZ_GRID = 2021
BESSEL_TAIL_TERMS = 60


def split_normal(
    be_m: BlockEncoding, tol: Tolerances | None = None
) -> tuple[BlockEncoding, BlockEncoding]:
    """
    Encodings of the Hermitian and anti-Hermitian parts of a normal M.

    :param be_m: BE_{alpha,m}(M; eps)
    :param tol: tolerances
    :return: (BE_{alpha,m+1}(A; eps), BE_{alpha,m+1}(B; eps)) with M = A + iB
    """

    tol = resolve(tol)
    defect = normality_defect(be_m.block())
    if defect > tol.split_normality:
        raise NotNormal(f"Encoded block is not normal, defect {defect:.3e}")

    composite = tol.for_dilations()
    pair = [be_m, adjoint(be_m, composite)]
    be_a = lcu(pair, [0.5, 0.5], tol=composite)
    be_b = lcu(pair, [-0.5j, 0.5j], tol=composite)
    logger.debug(
        "Split normal encoding: Hermiticity defects %.2e, %.2e",
        hermiticity_defect(extract_block(be_a)),
        hermiticity_defect(extract_block(be_b)),
    )
    return be_a, be_b


def _lipschitz(p: Poly1) -> float:
    grid = np.linspace(-LIPSCHITZ_MARGIN, LIPSCHITZ_MARGIN, LIPSCHITZ_GRID)
    return float(np.max(np.abs(p.derivative()(grid))))


def poly_be(
    be_a: BlockEncoding,
    p: Poly1,
    signal_qubits: int = 2,
    tol: Tolerances | None = None,
) -> BlockEncoding:
    """
    Encoding of p(A) for a Hermitian encoded block A with spectrum in [-1, 1].

    :param be_a: encoding of A
    :param p: polynomial with |p| <= 1 on [-1, 1]
    :param signal_qubits: ancillas charged on top of be_a's for the QSP circuit
    :param tol: tolerances
    :return: BE_{1, a + signal_qubits}(p(A); L_p eps), ledger be_a's times deg p
    """

    tol = resolve(tol)
    if signal_qubits < 1:
        raise ValueError("QSP needs at least one signal qubit")

    block = as_array(extract_block(be_a))
    defect = hermiticity_defect(block)
    if defect > 2 * be_a.epsilon + tol.hermiticity:
        raise NotHermitian(f"Encoded block is not Hermitian, defect {defect:.3e}")

    sup = p.sup_norm()
    if sup > 1 + tol.poly_bound_slack:
        raise PolyNotBounded(f"||p|| on [-1, 1] is {sup:.12g}")

    eigenvalues, vectors = scipy.linalg.eigh((block + block.conj().T) / 2)
    if np.max(np.abs(eigenvalues)) > 1 + tol.spectrum_slack:
        raise SpectrumOutOfRange(
            f"Spectrum reaches {np.max(np.abs(eigenvalues)):.12g}, outside [-1, 1]"
        )

    values = np.asarray(p(np.clip(eigenvalues, -1, 1)), dtype=complex)
    magnitudes = np.abs(values)
    if np.max(magnitudes) > 1:
        logger.debug(
            "Clipping |p| overshoot of %.3e on the spectrum", np.max(magnitudes) - 1
        )
    values = np.where(magnitudes > 1, values / np.maximum(magnitudes, 1), values)
    transformed = (vectors * values) @ vectors.conj().T

    composite = tol.for_dilations()
    dilated = dilate(transformed, 1.0, oracle=None, tol=tol)
    widened = padded(dilated, be_a.ancillas + signal_qubits, composite)
    return BlockEncoding(
        widened.unitary,
        1.0,
        widened.ancillas,
        _lipschitz(p) * be_a.epsilon,
        be_a.system_qubits,
        be_a.ledger.scaled(p.degree),
        tol=composite,
    )


def _map_terms(func: Callable, items: Sequence, tol: Tolerances) -> list:
    if tol.workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=tol.workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _check_unit_sup(g: PolyMV, tol: Tolerances):
    sup = sup_norm_estimate(g)
    if sup > 1 + tol.sup_slack:
        raise PolyNotBounded(f"||g|| on the cube is about {sup:.6g} > 1")


def qet_normal(
    be_m: BlockEncoding, g: PolyMV, degree_bound: int, tol: Tolerances | None = None
) -> QetResult:
    """
    Encoding of g(M) = G(Re M, Im M) for a normal M.

    :param be_m: BE_{alpha,m}(M; eps)
    :param g: bivariate polynomial, degree < D per variable, |g| <= 1 on the square
    :param degree_bound: D
    :param tol: tolerances
    :return: the encoding, its cost report and the decomposition used
    """

    tol = resolve(tol)
    if g.num_vars != 2:
        raise DimensionMismatch("Normal-matrix QET takes a bivariate polynomial")
    _check_unit_sup(g, tol)
    logger.info("Running QET for normal matrix, D=%s", degree_bound)

    be_a, be_b = split_normal(be_m, tol)
    decomposition = normalize(decompose_bivariate(g, degree_bound), tol)
    if not decomposition.terms:
        raise EmptyCombination("g vanishes identically")

    def build(term):
        (k,) = term.index
        return product(
            poly_be(be_a, cheb_T(k), signal_qubits=1, tol=tol),
            poly_be(be_b, term.tail, signal_qubits=1, tol=tol),
            tol.for_dilations(),
        )

    terms = _map_terms(build, decomposition.terms, tol)
    d = index_qubits(degree_bound, 1)
    result = lcu(
        terms, decomposition.betas, min_index_qubits=d, tol=tol.for_dilations()
    )

    matrix = as_array(extract_block(be_m))
    oracle = matrix_function_oracle([matrix], lambda lam: g(lam.real, lam.imag), tol)
    measured = operator_norm(as_array(extract_block(result)) - as_array(oracle))

    tally = 2 * be_m.ancillas + 4 + d
    report = CostReport(
        oracle_instances=result.ledger.counts,
        ancillas_used=result.ancillas,
        subnormalization=be_m.alpha**2 * decomposition.beta_l1,
        epsilon_claimed=result.epsilon,
        epsilon_measured=measured,
        input_instances=2
        * sum(term.index[0] + term.tail.degree for term in decomposition.terms),
        instance_bound=instance_bound_bivariate(degree_bound),
        ancilla_tallies={"2m+4+d": tally},
        tally_matches={"2m+4+d": result.ancillas == tally},
        epsilon_closed_form=2 * be_m.alpha * be_m.epsilon,
        backend_subnormalization=result.alpha,
        beta_l1=decomposition.beta_l1,
    )
    logger.info(
        "QET done: %s terms, %s ancillas, measured error %.3e",
        len(terms),
        result.ancillas,
        measured,
    )
    return QetResult(result, report, decomposition)


def mqet(
    encodings: Sequence[BlockEncoding],
    g: PolyMV,
    degree_bound: int,
    tol: Tolerances | None = None,
) -> QetResult:
    """
    Encoding of g(A_0, ..., A_r) for commuting Hermitian A_k.

    :param encodings: r + 1 encodings BE_{alpha_k, m_k}(A_k; eps_k)
    :param g: polynomial in r + 1 variables, degree < D each, |g| <= 1 on the cube
    :param degree_bound: D
    :param tol: tolerances
    :return: the encoding, its cost report and the decomposition used
    """

    tol = resolve(tol)
    if len(encodings) != g.num_vars:
        raise DimensionMismatch(
            f"{len(encodings)} encodings for a {g.num_vars}-variable polynomial"
        )
    if len({be.system_qubits for be in encodings}) != 1:
        raise DimensionMismatch("Encodings act on different system registers")

    blocks = [as_array(extract_block(be)) for be in encodings]
    for index, block in enumerate(blocks):
        if hermiticity_defect(block) > tol.hermiticity:
            raise NotHermitian(f"Encoded block {index} is not Hermitian")
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            defect = commutator_norm(blocks[i], blocks[j])
            if defect > tol.mqet_commutation:
                raise NotCommuting(f"Blocks {i} and {j} commute only to {defect:.3e}")
    _check_unit_sup(g, tol)

    factored = g.num_vars - 1
    logger.info("Running MQET, r=%s, D=%s", factored, degree_bound)
    decomposition = normalize(decompose_multivariate(g, degree_bound), tol)
    if not decomposition.terms:
        raise EmptyCombination("g vanishes identically")

    def build(term):
        factors = [
            poly_be(encodings[k], cheb_T(s), tol=tol) for k, s in enumerate(term.index)
        ]
        factors.append(poly_be(encodings[-1], term.tail, tol=tol))
        return product_chain(factors, tol.for_dilations())

    terms = _map_terms(build, decomposition.terms, tol)
    d = index_qubits(degree_bound, factored)
    result = lcu(
        terms, decomposition.betas, min_index_qubits=d, tol=tol.for_dilations()
    )

    oracle = matrix_function_oracle(blocks, g, tol)
    measured = operator_norm(as_array(extract_block(result)) - as_array(oracle))

    alpha = math.prod(be.alpha for be in encodings)
    m = sum(be.ancillas for be in encodings)
    tallies = {
        "2m+4+d": 2 * m + 4 + d,
        "m+4+d": m + 4 + d,
        "sum(m_k+2)+d": sum(be.ancillas + 2 for be in encodings) + d,
    }
    matches = {name: value == result.ancillas for name, value in tallies.items()}
    if not (matches["2m+4+d"] or matches["m+4+d"]):
        logger.warning(
            "Ancilla count %s matches neither closed-form tally %s",
            result.ancillas,
            tallies,
        )

    report = CostReport(
        oracle_instances=result.ledger.counts,
        ancillas_used=result.ancillas,
        subnormalization=alpha * decomposition.beta_l1,
        epsilon_claimed=result.epsilon,
        epsilon_measured=measured,
        input_instances=sum(
            sum(term.index) + term.tail.degree for term in decomposition.terms
        ),
        instance_bound=instance_bound_multivariate(degree_bound, factored),
        ancilla_tallies=tallies,
        tally_matches=matches,
        epsilon_closed_form=sum(be.alpha * be.epsilon for be in encodings),
        backend_subnormalization=result.alpha,
        beta_l1=decomposition.beta_l1,
    )
    logger.info(
        "MQET done: %s terms, %s ancillas, measured error %.3e",
        len(terms),
        result.ancillas,
        measured,
    )
    return QetResult(result, report, decomposition)


def chebyshev_exp_coefficients(t: float, degree: int) -> np.ndarray:
    """Chebyshev series of e^{xt}: I_0(t), 2 I_1(t), ..., 2 I_degree(t)."""

    if degree < 0:
        raise ValueError("Truncation degree must be non-negative")
    orders = np.arange(degree + 1)
    coefficients = 2 * scipy.special.iv(orders, t)
    coefficients[0] /= 2
    return coefficients


def exp_truncation_bound(t: float, degree: int) -> float:
    """sup |e^{xt} - truncated series| on [-1, 1] <= 2 sum_{k > degree} |I_k(t)|."""

    orders = np.arange(degree + 1, degree + 1 + BESSEL_TAIL_TERMS)
    return float(2 * np.sum(np.abs(scipy.special.iv(orders, t))))


def exp_normal(
    be_m: BlockEncoding,
    t: float,
    trunc_degree: int = 16,
    tol: Tolerances | None = None,
) -> BlockEncoding:
    """
    Encoding of e^{Mt} = e^{At} e^{iBt} for a normal M = A + iB.

    e^{At} comes from a truncated Chebyshev series of e^{xt} / e^{|t|} run
    through poly_be; e^{iBt} is the exact unitary of the extracted B.

    :param be_m: encoding of M
    :param t: time
    :param trunc_degree: degree of the Chebyshev truncation
    :param tol: tolerances
    :return: encoding with alpha = e^{|t|} times any sup-norm rescaling
    """

    tol = resolve(tol)
    if abs(t) * be_m.alpha > tol.max_exp_time:
        raise NormTooLarge(
            f"|t| alpha = {abs(t) * be_m.alpha:.6g} exceeds {tol.max_exp_time}"
        )
    logger.info("Exponentiating normal matrix, t=%s, degree %s", t, trunc_degree)

    be_a, be_b = split_normal(be_m, tol)

    truncation = exp_truncation_bound(t, trunc_degree)
    if truncation > tol.exp_truncation_target:
        logger.warning(
            "Truncation degree %s leaves error %.3e above target %.1e",
            trunc_degree,
            truncation,
            tol.exp_truncation_target,
        )

    envelope = math.exp(abs(t))
    series = ChebSeries1(chebyshev_exp_coefficients(t, trunc_degree) / envelope)
    p = series.to_poly()
    scale = max(1.0, p.sup_norm())
    p = p * (1 / scale)

    decay = poly_be(be_a, p, signal_qubits=1, tol=tol)
    factor = envelope * scale
    decay = BlockEncoding(
        decay.unitary,
        factor,
        decay.ancillas,
        factor * decay.epsilon + truncation,
        decay.system_qubits,
        decay.ledger,
        tol=tol.for_dilations(),
    )

    b = as_array(extract_block(be_b))
    generator = 1j * t * (b + b.conj().T) / 2
    rotation = unitary_be(scipy.linalg.expm(generator), oracle="exp(iBt)", tol=tol)
    rotation = BlockEncoding(
        rotation.unitary,
        1.0,
        0,
        abs(t) * be_b.epsilon,
        rotation.system_qubits,
        rotation.ledger,
        tol=tol,
    )
    return product(decay, rotation, tol.for_dilations())


def run_on_state(
    result: QetResult | BlockEncoding, state, tol: Tolerances | None = None
) -> tuple[StateVector, float]:
    """
    Apply an encoding to |0^a> (x) v and postselect the ancillas on zero.

    :param result: transform result or bare encoding
    :param state: system state v
    :param tol: tolerances
    :return: (normalised output state, success probability)
    """

    be = result.block_encoding if isinstance(result, QetResult) else result
    vector = as_array(state)
    if vector.shape != (be.system_dim,):
        raise DimensionMismatch(
            f"State of dim {vector.shape[0]} for a {be.system_qubits}-qubit encoding"
        )

    embedded = np.zeros(be.dim, dtype=complex)
    embedded[: be.system_dim] = vector
    return postselect_zero_ancilla(be.unitary.apply(embedded), be.ancillas, tol)
