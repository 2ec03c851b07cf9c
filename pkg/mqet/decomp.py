"""
Sum-of-products decompositions.

A polynomial g(x_0, ..., x_r) with degree < D in each variable is written as

    g = sum_s Q_s(x_r) prod_{k<r} T_{s_k}(x_k),   s in [[D]]^r,

where Q_s is the exact Chebyshev projection of g onto T_{s_0} ... T_{s_{r-1}}.
"""

# Standard Library
import itertools
import logging

# Third Party
import numpy as np
import scipy.linalg

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.chebpoly import projection_matrix
from mqet.models import DecompositionTerm, Poly1, PolyMV, ProductDecomposition
from mqet.utils import DegreeOverflow, DimensionMismatch, ceil_log2, exact_dot

logger = logging.getLogger(__name__)


def _check_degrees(g: PolyMV, degree_bound: int):
    if degree_bound < 1:
        raise ValueError("Degree bound must be positive")
    if any(d >= degree_bound for d in g.degrees):
        raise DegreeOverflow(
            f"Degrees {g.degrees} are not all below the bound {degree_bound}"
        )


def _project(g: PolyMV, degree_bound: int, axes: int) -> np.ndarray:
    """Chebyshev coefficients along the first ``axes`` axes, monomial in the rest."""

    tensor = g.padded((degree_bound,) * g.num_vars).coefficients
    matrix = projection_matrix(degree_bound)
    for axis in range(axes):
        moved = np.moveaxis(tensor, axis, 0)
        projected = np.stack([exact_dot(row, moved) for row in matrix])
        tensor = np.moveaxis(projected, 0, axis)
    return tensor


def decompose_multivariate(g: PolyMV, degree_bound: int) -> ProductDecomposition:
    """
    Project g onto products of Chebyshev polynomials in all but its last variable.

    :param g: polynomial in r + 1 variables, degree < D in each
    :param degree_bound: D
    :return: un-normalised decomposition with all D^r terms
    """

    _check_degrees(g, degree_bound)
    factored = g.num_vars - 1
    if factored < 1:
        raise DimensionMismatch("A product decomposition needs at least 2 variables")

    coefficients = _project(g, degree_bound, factored)
    terms = []
    for index in itertools.product(range(degree_bound), repeat=factored):
        tail = Poly1(coefficients[index])
        terms.append(DecompositionTerm(index, tail, tail.sup_norm()))

    logger.debug(
        "Decomposed %s-variable polynomial into %s terms", g.num_vars, len(terms)
    )
    return ProductDecomposition(factored, degree_bound, tuple(terms))


def decompose_bivariate(g: PolyMV, degree_bound: int) -> ProductDecomposition:
    """
    G(x, y) = sum_k T_k(x) Q_k(y).

    If |G| <= 1 on the square then |Q_k| <= 2 and ||beta||_1 <= 2D.
    """

    if g.num_vars != 2:
        raise DimensionMismatch(f"Expected a bivariate polynomial, got {g.num_vars}")
    return decompose_multivariate(g, degree_bound)


def normalize(
    decomposition: ProductDecomposition, tol: Tolerances | None = None
) -> ProductDecomposition:
    """
    Drop zero terms and rescale every Q_s to unit sup norm.

    :param decomposition: decomposition to normalise
    :param tol: tolerances
    :return: normalised decomposition, betas carrying the scale
    """

    if decomposition.normalized:
        return decomposition

    tol = resolve(tol)
    terms = []
    for term in decomposition.nonzero_terms(tol.zero_term_ratio):
        tail = decomposition.effective_tail(term)
        beta = tail.sup_norm()
        terms.append(DecompositionTerm(term.index, tail * (1 / beta), beta))

    return ProductDecomposition(
        decomposition.num_factored,
        decomposition.degree_bound,
        tuple(terms),
        normalized=True,
    )


def coefficient_matrix(g: PolyMV, degree_bound: int) -> np.ndarray:
    """
    D x D matrix of c_{l,m} (coefficient of x^l y^m), zero where l + m >= D.
    """

    if g.num_vars != 2:
        raise DimensionMismatch("The coefficient matrix is for bivariate polynomials")
    _check_degrees(g, degree_bound)
    full = g.padded((degree_bound, degree_bound)).coefficients
    rows, cols = np.indices(full.shape)
    return np.where(rows + cols < degree_bound, full, 0)


def rank_certificate(
    g: PolyMV, degree_bound: int, tol: Tolerances | None = None
) -> int:
    """
    Lower bound on the number of product terms in any decomposition of G.

    Any G = sum_e A_e(x) B_e(y) factors the coefficient matrix through E
    terms, so its numerical rank bounds E from below. For G of total degree
    below D this is the anti-triangular matrix; otherwise the full D x D
    coefficient matrix is used, as only it factors.

    :param g: bivariate polynomial
    :param degree_bound: D
    :param tol: tolerances
    :return: numerical rank, singular values above rank_ratio * sigma_max
    """

    tol = resolve(tol)
    _check_degrees(g, degree_bound)
    full = g.padded((degree_bound, degree_bound)).coefficients
    triangular = coefficient_matrix(g, degree_bound)
    matrix = triangular if np.array_equal(full, triangular) else full

    singular = scipy.linalg.svdvals(matrix)
    if singular[0] == 0:
        return 0
    return int(np.sum(singular > tol.rank_ratio * singular[0]))


def subnormalization_bounds(degree_bound: int, factored: int) -> dict[str, int]:
    """
    Bounds on ||beta||_1 for a unit-sup g in r + 1 variables.

    ``provable`` follows from |Q_s| <= prod (2 - delta_{s_k,0}); ``closed_form``
    is the (D+2)^r figure and ``zero_count_sum`` the sum of 2^{z(s)} over s,
    z(s) the number of zero entries of s.
    """

    return {
        "provable": (2 * degree_bound - 1) ** factored,
        "closed_form": (degree_bound + 2) ** factored,
        "zero_count_sum": sum(
            2 ** sum(1 for k in s if k == 0)
            for s in itertools.product(range(degree_bound), repeat=factored)
        ),
    }


def good_scaling_bound(degree_bound: int) -> float:
    """||beta||_1 bound 2D for the bivariate case."""
    return float(2 * degree_bound)


def nonzero_term_count(
    decomposition: ProductDecomposition, tol: Tolerances | None = None
) -> int:
    return len(decomposition.nonzero_terms(resolve(tol).zero_term_ratio))


def chebyshev_product(index: tuple[int, ...]) -> str:
    """Readable label like ``T1(x0) T0(x1)`` for reports."""
    return " ".join(f"T{s}(x{k})" for k, s in enumerate(index)) or "1"


def instance_bound_bivariate(degree_bound: int) -> int:
    return 4 * (degree_bound - 1) * degree_bound


def instance_bound_multivariate(degree_bound: int, factored: int) -> int:
    return 2 * (degree_bound - 1) * factored * degree_bound**factored


def index_qubits(degree_bound: int, factored: int) -> int:
    """ceil(log2 D^r): width of the LCU index register over all terms."""
    return max(1, ceil_log2(degree_bound**factored))
