"""
Chebyshev machinery on [-1, 1] under the weight dx / sqrt(1 - x^2).

Monomial coefficients of T_k are exact integers and inner products of
monomials against T_j are binomial ratios, so the conversions here are
built from exact integers and only rounded at the end.
"""

# Standard Library
import logging
import math
from fractions import Fraction
from functools import lru_cache

# Third Party
import numpy as np
from numpy.polynomial import polynomial as P

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.models import ChebSeries1, Poly1
from mqet.utils import DuplicateNodes, exact_dot

logger = logging.getLogger(__name__)

MAX_DEGREE = 512


@lru_cache(maxsize=None)
def chebyshev_integer_coefficients(k: int) -> tuple[int, ...]:
    """
    Monomial coefficients of T_k from T_{n+1} = 2x T_n - T_{n-1}.

    :param k: degree
    :return: exact integer coefficients, index = power
    """

    if k < 0:
        raise ValueError("Chebyshev degree must be non-negative")
    if k == 0:
        return (1,)
    if k == 1:
        return (0, 1)

    previous, current = [1], [0, 1]
    for _ in range(1, k):
        following = [0] + [2 * c for c in current]
        for power, c in enumerate(previous):
            following[power] -= c
        previous, current = current, following
    return tuple(current)


def chebyshev_explicit_coefficients(n: int) -> tuple[int, ...]:
    """
    Monomial coefficients of T_n from the closed-form sum

        T_n(x) = n/2 sum_k (-1)^k (n-k-1)! / (k! (n-2k)!) (2x)^(n-2k)
    """

    if n == 0:
        return (1,)
    out = [0] * (n + 1)
    for k in range(n // 2 + 1):
        term = Fraction(n, 2) * Fraction(
            (-1) ** k * math.factorial(n - k - 1),
            math.factorial(k) * math.factorial(n - 2 * k),
        )
        value = term * 2 ** (n - 2 * k)
        if value.denominator != 1:
            raise ArithmeticError(f"Non-integer coefficient in T_{n}")
        out[n - 2 * k] = int(value)
    return tuple(out)


def cheb_T(k: int) -> Poly1:
    """T_k in the monomial basis."""

    if k > MAX_DEGREE:
        raise ValueError(f"Chebyshev degree {k} exceeds {MAX_DEGREE}")
    return Poly1([float(c) for c in chebyshev_integer_coefficients(k)])


def _binomial_ratio(j: int, m: int) -> Fraction:
    """<x^m, T_j>_mu / pi as an exact rational."""

    if m < j or (m - j) % 2:
        return Fraction(0)
    return Fraction(math.comb(m, (m - j) // 2), 2**m)


def monomial_cheb_inner(j: int, m: int) -> float:
    """
    Integral of x^m T_j(x) / sqrt(1 - x^2) over [-1, 1].

    :param j: Chebyshev index
    :param m: monomial power
    :return: pi / 2^m * C(m, (m - j) / 2) when m >= j with equal parity, else 0
    """

    if j < 0 or m < 0:
        raise ValueError("Indices must be non-negative")
    return math.pi * float(_binomial_ratio(j, m))


@lru_cache(maxsize=64)
def _projection(rows: int, cols: int) -> np.ndarray:
    out = np.zeros((rows, cols))
    for k in range(rows):
        for m in range(k, cols, 2):
            out[k, m] = float((2 - (k == 0)) * _binomial_ratio(k, m))
    out.flags.writeable = False
    return out


def projection_matrix(rows: int, cols: int | None = None) -> np.ndarray:
    """
    Map from monomial to Chebyshev coefficients.

    Entry [k, m] is (2 - delta_k0) / pi * <x^m, T_k>_mu, so row k applied to
    monomial coefficients gives the k-th Chebyshev coefficient.
    """

    return _projection(rows, rows if cols is None else cols)


def cheb_coeffs(p: Poly1) -> ChebSeries1:
    """
    Chebyshev coefficients c_k = (2 - delta_k0) / pi * <p, T_k>_mu.

    Sums longer than 64 terms are compensated.
    """

    if p.degree > MAX_DEGREE:
        raise ValueError(f"Degree {p.degree} exceeds {MAX_DEGREE}")
    size = p.degree + 1
    matrix = projection_matrix(size)
    coefficients = [exact_dot(matrix[k], p.coefficients) for k in range(size)]
    return ChebSeries1(np.array(coefficients, dtype=complex))


def cheb_gauss_quadrature(p: Poly1, nodes: int) -> complex:
    """
    Gauss-Chebyshev rule, exact for degree < 2 * nodes.

    :param p: integrand without the weight
    :param nodes: number of T_nodes roots
    :return: (pi / nodes) * sum p(t_l)
    """

    if nodes < 1:
        raise ValueError("Quadrature needs at least one node")
    if p.degree >= 2 * nodes:
        raise ValueError(f"Degree {p.degree} is not exact with {nodes} nodes")
    return complex(math.pi / nodes * np.sum(p(cheb_points(nodes))))


def cheb_points(n: int) -> np.ndarray:
    """Roots of T_n, cos((2l + 1) pi / (2n)), in decreasing order."""

    if n < 1:
        raise ValueError("Need at least one Chebyshev point")
    return np.cos((2 * np.arange(n) + 1) * np.pi / (2 * n))


def lagrange_basis(nodes, k: int, tol: Tolerances | None = None) -> Poly1:
    """
    Lagrange polynomial equal to 1 at nodes[k] and 0 at the other nodes.

    :param nodes: distinct real nodes
    :param k: index of the node where the polynomial is 1
    :param tol: tolerances
    :return: Poly1 of degree len(nodes) - 1
    """

    tol = resolve(tol)
    nodes = np.asarray(nodes, dtype=float)
    if not 0 <= k < len(nodes):
        raise IndexError(f"Node index {k} out of range for {len(nodes)} nodes")
    if len(nodes) > 1 and np.min(np.diff(np.sort(nodes))) <= tol.node_gap:
        raise DuplicateNodes("Interpolation nodes are not distinct")

    others = np.delete(nodes, k)
    if len(others) == 0:
        return Poly1([1.0])
    return Poly1(P.polyfromroots(others) / np.prod(nodes[k] - others))


def synthetic_division(coefficients, root: float) -> tuple[np.ndarray, float]:
    """
    Divide p(x) by (x - root).

    Runs f_0 = a_n, f_j = root * f_(j-1) + a_(n-j); f_0..f_(n-1) are the
    quotient coefficients from the top power down and f_n is the remainder.

    :param coefficients: ascending monomial coefficients of p
    :param root: the root of the linear divisor
    :return: (ascending quotient coefficients, remainder)
    """

    descending = list(coefficients)[::-1]
    running = [descending[0]]
    for a in descending[1:]:
        running.append(root * running[-1] + a)
    return np.array(running[:-1][::-1]), running[-1]


def chebint_lagrange(n: int, i: int, k: int) -> float:
    """
    Integral of T_k(x) L_n^(i)(x) dmu on the T_n roots.

    L_n^(i) = T_n(x) / ((x - t_i) T_n'(t_i)); the quotient comes from
    synthetic division of T_n's monomial coefficients.

    :param n: number of Chebyshev points
    :param i: index of the point where the Lagrange polynomial is 1
    :param k: Chebyshev index
    :return: the integral
    """

    if n < 1 or not 0 <= i < n:
        raise IndexError(f"Lagrange index {i} out of range for {n} points")
    if k < 0:
        raise ValueError("Chebyshev index must be non-negative")

    theta = (2 * i + 1) * math.pi / (2 * n)
    quotient, _ = synthetic_division(cheb_T(n).coefficients.real, math.cos(theta))
    slope = n * math.sin(n * theta) / math.sin(theta)
    lagrange = quotient / slope

    weights = np.array([monomial_cheb_inner(k, m) for m in range(len(lagrange))])
    return float(np.real(exact_dot(weights, lagrange)))


def chebyshev_gram(j: int, k: int) -> float:
    """
    <T_j, T_k>_mu evaluated exactly from the integer coefficients.

    :return: pi for j = k = 0, pi / 2 for j = k > 0 and exactly 0 otherwise
    """

    first = chebyshev_integer_coefficients(j)
    second = chebyshev_integer_coefficients(k)
    total = Fraction(0)
    for a, x in enumerate(first):
        if not x:
            continue
        for b, y in enumerate(second):
            if y:
                total += x * y * _binomial_ratio(0, a + b)
    return math.pi * float(total)
