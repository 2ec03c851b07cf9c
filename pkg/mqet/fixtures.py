"""Seeded random inputs for tests and CLI runs."""

# Third Party
import numpy as np
import scipy.linalg

# MQET
from mqet.approx import sup_norm_bound
from mqet.models import PolyMV, PrepareOracle


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(shape, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-random unitary: QR of a complex Ginibre matrix, with the phases of
    R's diagonal moved into Q.
    """

    q, r = scipy.linalg.qr(_ginibre((dim, dim), rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_contraction(dim: int, rng: np.random.Generator, norm: float = 0.9):
    """Ginibre matrix rescaled to operator norm ``norm``."""

    matrix = _ginibre((dim, dim), rng)
    return matrix * (norm / scipy.linalg.svdvals(matrix)[0])


def random_normal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """U diag(lambda) U^dagger with lambda uniform in the closed unit disk."""

    radius = np.sqrt(rng.uniform(0, 1, dim))
    angle = rng.uniform(0, 2 * np.pi, dim)
    u = haar_unitary(dim, rng)
    return (u * (radius * np.exp(1j * angle))) @ u.conj().T


def random_commuting_hermitians(
    dim: int, count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Hermitian matrices sharing one random eigenbasis, with spectra in [-1, 1]."""

    v = haar_unitary(dim, rng)
    out = []
    for _ in range(count):
        spectrum = rng.uniform(-1, 1, dim)
        matrix = (v * spectrum) @ v.conj().T
        out.append((matrix + matrix.conj().T) / 2)
    return out


def non_commuting_pair(dim: int, rng: np.random.Generator) -> list[np.ndarray]:
    """A diagonal and a rotated Hermitian contraction that do not commute."""

    first = np.diag(np.linspace(-0.9, 0.9, dim)).astype(complex)
    v = haar_unitary(dim, rng)
    second = (v * rng.uniform(-0.9, 0.9, dim)) @ v.conj().T
    return [first, (second + second.conj().T) / 2]


def _unit_sup(coefficients: np.ndarray) -> PolyMV:
    p = PolyMV(coefficients)
    return p.scaled(1 / sup_norm_bound(p))


def random_unit_sup_polymv(
    num_vars: int, degree_bound: int, rng: np.random.Generator
) -> PolyMV:
    """
    Random complex polynomial, degree < D in each variable, scaled by its
    guaranteed sup-norm upper bound so that |g| <= 1 on the cube.
    """

    return _unit_sup(_ginibre((degree_bound,) * num_vars, rng))


def random_antidiagonal_bivariate(
    degree_bound: int, rng: np.random.Generator
) -> PolyMV:
    """
    Random G of total degree D - 1 whose maximal monomials x^l y^(D-1-l)
    all have nonzero coefficients, scaled to unit sup.
    """

    coefficients = _ginibre((degree_bound, degree_bound), rng)
    rows, cols = np.indices(coefficients.shape)
    coefficients[rows + cols >= degree_bound] = 0

    diagonal = rows + cols == degree_bound - 1
    magnitudes = np.abs(coefficients[diagonal])
    coefficients[diagonal] *= np.maximum(1.0, 0.5 / magnitudes)
    return _unit_sup(coefficients)


def random_prepare_oracle(qubits: int, rng: np.random.Generator) -> PrepareOracle:
    return PrepareOracle(haar_unitary(2**qubits, rng))
