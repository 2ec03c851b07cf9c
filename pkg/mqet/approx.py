"""Tensor-grid Chebyshev interpolation and Jackson-type error bounds."""

# Standard Library
import logging
import math
from collections.abc import Sequence

# Third Party
import numpy as np

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.chebpoly import cheb_points, lagrange_basis
from mqet.models import FunctionSpec, PolyMV
from mqet.utils import (
    DimensionMismatch,
    NonFiniteValue,
    NotExtensible,
    UnknownBuiltin,
)

logger = logging.getLogger(__name__)

CONTINUITY_GRID = 10_000


def chebyshev_extrema(size: int) -> np.ndarray:
    """cos(pi j / (size - 1)), j = 0..size-1; includes both endpoints."""

    if size < 2:
        raise ValueError("An extrema grid needs at least 2 points")
    return np.cos(np.pi * np.arange(size) / (size - 1))


def _lagrange_matrix(n: int, tol: Tolerances) -> np.ndarray:
    """Row k holds the monomial coefficients of L_n^(k) on the T_n roots."""

    nodes = cheb_points(n)
    out = np.zeros((n, n), dtype=complex)
    for k in range(n):
        coefficients = lagrange_basis(nodes, k, tol).coefficients
        out[k, : len(coefficients)] = coefficients
    return out


def tensor_interpolate(
    f: FunctionSpec, degrees: Sequence[int], tol: Tolerances | None = None
) -> PolyMV:
    """
    Interpolate f on the tensor grid of Chebyshev points.

    Values on the grid are contracted against the per-axis Lagrange
    coefficient matrices, giving the monomial coefficient tensor directly.

    :param f: function of ``len(degrees)`` variables
    :param degrees: number of points n_l per axis; degree in x_l is < n_l
    :param tol: tolerances
    :return: interpolating polynomial with degree bounds ``degrees``
    """

    tol = resolve(tol)
    degrees = tuple(int(n) for n in degrees)
    if f.arity != len(degrees):
        raise DimensionMismatch(f"{f.arity}-ary function with {len(degrees)} degrees")
    if any(n < 1 for n in degrees):
        raise ValueError("Every axis needs at least one interpolation point")

    grid = np.meshgrid(*[cheb_points(n) for n in degrees], indexing="ij")
    values = np.asarray(f(*grid), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(f"{f.name} returned non-finite values on the grid")
    check_extensibility(f, values)

    tensor = values
    for axis, n in enumerate(degrees):
        lagrange = _lagrange_matrix(n, tol)
        tensor = np.moveaxis(np.tensordot(lagrange.T, tensor, axes=(1, axis)), 0, axis)

    logger.debug("Interpolated %s on a %s grid", f.name, degrees)
    return PolyMV(tensor)


def check_extensibility(f: FunctionSpec, values: np.ndarray):
    """Sampled values must respect a declared bound |f| <= gamma."""

    if f.gamma is None:
        return
    largest = float(np.max(np.abs(values)))
    if largest > f.gamma * (1 + 1e-12):
        raise NotExtensible(f"|{f.name}| reaches {largest:.6g} > gamma = {f.gamma}")


def jackson_bound_1d(
    k: int, derivative_bound: float, n: int, a: float = -1.0, b: float = 1.0
) -> float:
    """
    Distance from a C^k function on [a, b] to polynomials of degree <= n.

    :return: ((pi / 4)(b - a))^k / (k! C(n + 1, k)) * ||f^(k)||
    """

    if not 0 <= k < n:
        raise ValueError(f"Need 0 <= k < n, got k={k}, n={n}")
    scale = (math.pi / 4 * (b - a)) ** k
    return scale * derivative_bound / (math.factorial(k) * math.comb(n + 1, k))


def jackson_bound_2d(k: int, derivative_bound: float, n1: int, n2: int) -> float:
    """
    Interpolation error bound on the square, logarithm base 2.

    :param k: smoothness order, 0 <= k <= n1, n2
    :param derivative_bound: M_k(f)
    :param n1: points along x
    :param n2: points along y
    :return: (pi/2)^k M_k / k! * n1 log2(n2) / C(n2 + 1, k)
    """

    if not 0 <= k <= min(n1, n2):
        raise ValueError(f"Need 0 <= k <= n1, n2, got k={k}")
    prefactor = (math.pi / 2) ** k * derivative_bound / math.factorial(k)
    return prefactor * n1 * math.log2(n2) / math.comb(n2 + 1, k)


def jackson_bound_dd(k: int, derivative_bound: float, degrees: Sequence[int]) -> float:
    """
    Interpolation error bound on the d-cube.

    Sum over l >= 2 of log2(n_l) / C(n_l + 1, k) * prod_{j<l} n_j, times
    (pi/2)^k M_k / k!.
    """

    degrees = list(degrees)
    if len(degrees) < 2:
        raise ValueError("The cube bound needs at least two variables")
    if not 0 <= k <= min(degrees[1:]):
        raise ValueError(f"Need 0 <= k <= n_l for l >= 2, got k={k}")

    prefactor = (math.pi / 2) ** k * derivative_bound / math.factorial(k)
    total = 0.0
    for axis in range(1, len(degrees)):
        n = degrees[axis]
        total += math.log2(n) / math.comb(n + 1, k) * math.prod(degrees[:axis])
    return prefactor * total


def modulus_of_continuity(
    f: FunctionSpec, delta: float, points: int = CONTINUITY_GRID
) -> float:
    """
    Grid estimate of sup |f(x) - f(y)| over |x - y| < delta in [-1, 1].

    Only pairs of grid points are compared, so this never exceeds the true
    modulus.
    """

    if not delta > 0:
        raise ValueError("delta must be positive")
    if f.arity != 1:
        raise DimensionMismatch("Modulus of continuity is for univariate functions")

    grid = np.linspace(-1.0, 1.0, points)
    values = np.asarray(f(grid), dtype=complex)
    step = grid[1] - grid[0]
    widest = min(math.ceil(delta / step) - 1, points - 1)

    best = 0.0
    for shift in range(1, widest + 1):
        best = max(best, float(np.max(np.abs(values[shift:] - values[:-shift]))))
    return best


def rivlin_jackson_bound(f: FunctionSpec, n: int) -> float:
    """6 omega(f, 1/n), a bound on the best degree-n approximation error."""

    if n < 1:
        raise ValueError("Degree must be positive")
    return 6 * modulus_of_continuity(f, 1 / n)


def _extrema_size(p: PolyMV, grid_per_axis: int | None) -> int:
    minimum = max(4 * max(p.degrees), 2)
    if grid_per_axis is None or grid_per_axis < minimum:
        logger.debug("Raising sup-norm grid from %s to %s", grid_per_axis, minimum)
        return minimum
    return grid_per_axis


def sup_norm_estimate(p: PolyMV, grid_per_axis: int | None = None) -> float:
    """
    max |p| over the tensor Chebyshev-extrema grid (endpoints included).

    This under-estimates the true sup norm by at most the factor
    ``refinement_factor(p, grid_per_axis)``.

    :param p: polynomial
    :param grid_per_axis: points per axis, at least 4 times the largest degree
    :return: grid maximum
    """

    size = _extrema_size(p, grid_per_axis)
    axes = [chebyshev_extrema(size)] * p.num_vars
    return float(np.max(np.abs(p.evaluate_grid(axes))))


def refinement_factor(p: PolyMV, grid_per_axis: int | None = None) -> float:
    """
    Ehlich-Zeller factor prod_l sec(pi deg_l / (2 (M - 1))) turning the grid
    maximum into a guaranteed upper bound.
    """

    size = _extrema_size(p, grid_per_axis)
    return float(
        np.prod([1 / math.cos(math.pi * d / (2 * (size - 1))) for d in p.degrees])
    )


def sup_norm_bound(p: PolyMV, grid_per_axis: int | None = None) -> float:
    return sup_norm_estimate(p, grid_per_axis) * refinement_factor(p, grid_per_axis)


def builtin_functions() -> dict[str, FunctionSpec]:
    """Named bivariate test functions with honest (k, M_k) declarations."""

    return {
        "exp": FunctionSpec(
            2,
            lambda x, y: np.exp(x) * np.cos(y),
            smoothness=2,
            derivative_bound=math.e,
            name="exp",
        ),
        "trig": FunctionSpec(
            2,
            lambda x, y: np.sin(2 * x) + 1j * y**3,
            smoothness=3,
            derivative_bound=6.0,
            name="trig",
        ),
        "quadratic": FunctionSpec(
            2,
            lambda x, y: (x**2 + y**2) / 2,
            smoothness=2,
            derivative_bound=1.0,
            name="quadratic",
        ),
        "rational": FunctionSpec(
            2,
            lambda x, y: 1 / (3 - x - 1j * y),
            gamma=1.0,
            name="rational",
        ),
    }


def builtin_function(name: str) -> FunctionSpec:
    functions = builtin_functions()
    if name not in functions:
        raise UnknownBuiltin(
            f"Unknown builtin {name!r}, expected one of {sorted(functions)}"
        )
    return functions[name]
