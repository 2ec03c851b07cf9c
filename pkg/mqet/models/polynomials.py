"""Polynomial and function value types."""

# Standard Library
from collections.abc import Callable, Sequence
from dataclasses import dataclass

# Third Party
import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P

# MQET
from mqet.utils import DimensionMismatch, require_finite

__all__ = ["Poly1", "ChebSeries1", "PolyMV", "FunctionSpec"]

ROOT_IMAG_CUTOFF = 1e-8


def _frozen_coefficients(values, ndim: int | None = None) -> np.ndarray:
    array = np.array(values, dtype=complex, copy=True)
    if ndim is not None and array.ndim != ndim:
        raise DimensionMismatch(f"Expected {ndim}-D coefficients, got {array.shape}")
    if array.size == 0:
        raise ValueError("A polynomial needs at least one coefficient")
    require_finite(array, "coefficient")
    array.flags.writeable = False
    return array


def _trim(coefficients: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(coefficients)
    if len(nonzero) == 0:
        return coefficients[:1]
    return coefficients[: nonzero[-1] + 1]


@dataclass(frozen=True, eq=False)
class Poly1:
    """
    Univariate complex polynomial, ``coefficients[j]`` multiplies ``x**j``.

    Trailing exact zeros are trimmed, so ``degree`` is the true degree
    (0 for the zero polynomial).
    """

    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = _trim(np.asarray(self.coefficients, dtype=complex).ravel())
        object.__setattr__(self, "coefficients", _frozen_coefficients(coefficients, 1))

    @classmethod
    def constant(cls, value: complex) -> "Poly1":
        return cls([value])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def __call__(self, x):
        return P.polyval(np.asarray(x), self.coefficients)

    def derivative(self) -> "Poly1":
        if self.degree == 0:
            return Poly1([0])
        return Poly1(P.polyder(self.coefficients))

    def __add__(self, other: "Poly1") -> "Poly1":
        return Poly1(P.polyadd(self.coefficients, other.coefficients))

    def __sub__(self, other: "Poly1") -> "Poly1":
        return Poly1(P.polysub(self.coefficients, other.coefficients))

    def __mul__(self, other):
        if isinstance(other, Poly1):
            return Poly1(P.polymul(self.coefficients, other.coefficients))
        return Poly1(self.coefficients * other)

    __rmul__ = __mul__

    def sup_norm(self) -> float:
        """
        max |p(x)| on [-1, 1].

        Taken over the critical points of |p|^2 in [-1, 1], the endpoints and
        a Chebyshev-extrema grid, so misplaced roots cannot hide the maximum.
        """

        if self.degree == 0:
            return float(abs(self.coefficients[0]))

        re, im = self.coefficients.real, self.coefficients.imag
        squared = P.polyadd(P.polymul(re, re), P.polymul(im, im))
        slope = P.polyder(squared)
        roots = P.polyroots(slope) if len(_trim(slope.astype(complex))) > 1 else []
        critical = [
            r.real
            for r in np.atleast_1d(roots)
            if abs(r.imag) <= ROOT_IMAG_CUTOFF and -1 <= r.real <= 1
        ]

        size = max(64, 8 * self.degree)
        grid = np.cos(np.pi * np.arange(size) / (size - 1))
        points = np.concatenate([grid, critical, [-1.0, 1.0]])
        return float(np.max(np.abs(self(points))))

    def __repr__(self):
        return f"Poly1(degree={self.degree})"


@dataclass(frozen=True, eq=False)
class ChebSeries1:
    """Univariate polynomial in the Chebyshev basis: ``sum c_k T_k``."""

    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = _trim(np.asarray(self.coefficients, dtype=complex).ravel())
        object.__setattr__(self, "coefficients", _frozen_coefficients(coefficients, 1))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return C.chebval(np.asarray(x), self.coefficients)

    def to_poly(self) -> Poly1:
        return Poly1(C.cheb2poly(self.coefficients))

    def __repr__(self):
        return f"ChebSeries1(degree={self.degree})"


@dataclass(frozen=True, eq=False)
class PolyMV:
    """
    Multivariate complex polynomial as a dense coefficient tensor.

    ``coefficients[l_1, ..., l_d]`` multiplies ``x_1**l_1 * ... * x_d**l_d``,
    so the shape gives the per-variable degree bounds (degree < bound).
    """

    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=complex)
        if coefficients.ndim == 0:
            raise DimensionMismatch(
                "A multivariate polynomial needs at least 1 variable"
            )
        object.__setattr__(self, "coefficients", _frozen_coefficients(coefficients))

    @property
    def num_vars(self) -> int:
        return self.coefficients.ndim

    @property
    def degree_bounds(self) -> tuple[int, ...]:
        return self.coefficients.shape

    @property
    def degrees(self) -> tuple[int, ...]:
        """Actual degree in each variable, ignoring zero slabs."""
        out = []
        for axis in range(self.num_vars):
            other = tuple(a for a in range(self.num_vars) if a != axis)
            used = np.flatnonzero(np.any(self.coefficients != 0, axis=other))
            out.append(int(used[-1]) if len(used) else 0)
        return tuple(out)

    def padded(self, bounds: Sequence[int]) -> "PolyMV":
        if len(bounds) != self.num_vars:
            raise DimensionMismatch("Wrong number of degree bounds")
        if any(b < n for b, n in zip(bounds, self.degree_bounds)):
            raise ValueError("Padding cannot shrink a coefficient tensor")
        pad = [(0, b - n) for b, n in zip(bounds, self.degree_bounds)]
        return PolyMV(np.pad(self.coefficients, pad))

    def scaled(self, factor: complex) -> "PolyMV":
        return PolyMV(self.coefficients * factor)

    def __call__(self, *coords):
        """Evaluate at broadcast coordinate arrays, one per variable."""

        if len(coords) != self.num_vars:
            raise DimensionMismatch(
                f"Polynomial in {self.num_vars} variables called with {len(coords)}"
            )
        arrays = np.broadcast_arrays(*[np.asarray(x) for x in coords])
        shape = arrays[0].shape
        tensor = self.coefficients
        for axis, x in enumerate(arrays):
            powers = P.polyvander(x.ravel(), self.degree_bounds[axis] - 1)
            if axis == 0:
                tensor = np.tensordot(powers, tensor, axes=(1, 0))
            else:
                tensor = np.einsum("pa,pa...->p...", powers, tensor)
        return tensor.reshape(shape)

    def evaluate_grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Values on the tensor grid ``axes[0] x ... x axes[d-1]``."""

        if len(axes) != self.num_vars:
            raise DimensionMismatch("One grid axis per variable is required")
        tensor = self.coefficients
        for axis, x in enumerate(axes):
            powers = P.polyvander(np.asarray(x), self.degree_bounds[axis] - 1)
            tensor = np.moveaxis(np.tensordot(powers, tensor, axes=(1, axis)), 0, axis)
        return tensor

    def __repr__(self):
        return f"PolyMV(degree_bounds={self.degree_bounds})"


@dataclass(frozen=True)
class FunctionSpec:
    """
    A black-box function on [-1, 1]^d with its declared regularity.

    ``smoothness`` k and ``derivative_bound`` M_k bound the k-th partial of
    Re f and Im f along every variable but the first. ``gamma`` bounds |f|
    on the extension domain when f is declared extensible.
    """

    arity: int
    func: Callable[..., np.ndarray]
    smoothness: int | None = None
    derivative_bound: float | None = None
    gamma: float | None = None
    name: str = "f"

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("A function needs at least one argument")
        if (self.smoothness is None) != (self.derivative_bound is None):
            raise ValueError("Smoothness and its derivative bound go together")
        if self.smoothness is not None and self.smoothness < 0:
            raise ValueError("Smoothness order must be non-negative")

    @classmethod
    def from_polynomial(cls, polynomial: PolyMV, name: str = "poly") -> "FunctionSpec":
        return cls(arity=polynomial.num_vars, func=polynomial, name=name)

    def __call__(self, *coords) -> np.ndarray:
        arrays = np.broadcast_arrays(*[np.asarray(x, dtype=float) for x in coords])
        values = np.asarray(self.func(*arrays), dtype=complex)
        return np.broadcast_to(values, arrays[0].shape)
