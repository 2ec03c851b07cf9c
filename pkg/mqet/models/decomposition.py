"""Product decomposition value types."""

# Standard Library
from dataclasses import dataclass

# Third Party
import numpy as np
from numpy.polynomial import chebyshev as C

# MQET
from mqet.models.polynomials import Poly1
from mqet.utils import DimensionMismatch

__all__ = ["DecompositionTerm", "ProductDecomposition"]


@dataclass(frozen=True)
class DecompositionTerm:
    """
    One term ``Q_s(x_last) * prod_k T_{s_k}(x_k)``.

    When the owning decomposition is normalised, ``tail`` is the unit-sup
    Q~_s and ``beta`` carries the scale; otherwise ``tail`` is Q_s itself and
    ``beta`` is its sup norm.
    """

    index: tuple[int, ...]
    tail: Poly1
    beta: float


@dataclass(frozen=True)
class ProductDecomposition:
    """``g = sum_s Q_s(x_r) prod_{k<r} T_{s_k}(x_k)`` over s in [[D]]^r."""

    num_factored: int
    degree_bound: int
    terms: tuple[DecompositionTerm, ...]
    normalized: bool = False

    def __post_init__(self):
        for term in self.terms:
            if len(term.index) != self.num_factored:
                raise DimensionMismatch(f"Term index {term.index} has the wrong length")
            if any(not 0 <= s < self.degree_bound for s in term.index):
                raise ValueError(f"Term index {term.index} is outside [[D]]^r")

    @property
    def num_vars(self) -> int:
        return self.num_factored + 1

    @property
    def betas(self) -> np.ndarray:
        return np.array([term.beta for term in self.terms])

    @property
    def beta_l1(self) -> float:
        return float(np.sum(self.betas))

    def effective_tail(self, term: DecompositionTerm) -> Poly1:
        return term.tail * term.beta if self.normalized else term.tail

    def nonzero_terms(self, ratio: float = 1e-12) -> tuple[DecompositionTerm, ...]:
        """Terms whose Q_s sup norm is at least ``ratio`` times the largest one."""

        if not self.terms:
            return ()
        sups = [self.effective_tail(term).sup_norm() for term in self.terms]
        cutoff = ratio * max(sups)
        return tuple(t for t, s in zip(self.terms, sups) if s > 0 and s >= cutoff)

    def __call__(self, *coords) -> np.ndarray:
        if len(coords) != self.num_vars:
            raise DimensionMismatch(f"Expected {self.num_vars} coordinates")
        arrays = np.broadcast_arrays(*[np.asarray(x, dtype=float) for x in coords])
        total = np.zeros(arrays[0].shape, dtype=complex)
        for term in self.terms:
            value = self.effective_tail(term)(arrays[-1])
            for k, s in enumerate(term.index):
                value = value * C.chebval(arrays[k], np.eye(s + 1)[s])
            total = total + value
        return total
