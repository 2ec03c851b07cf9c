"""Block-encoding and cost ledger value types."""

# Standard Library
from collections import Counter
from collections.abc import Mapping
from dataclasses import InitVar, dataclass, field

# Third Party
import numpy as np

# MQET
from mqet.app_settings import Tolerances, resolve
from mqet.models.matrices import ComplexMatrix
from mqet.operators import UnitaryOperator, is_unitary
from mqet.utils import DimensionMismatch, NotUnitary

__all__ = ["CostLedger", "BlockEncoding"]


@dataclass(frozen=True)
class CostLedger:
    """
    Instances of each named base oracle, adjoints and controlled uses included,
    plus the widest ancilla register seen so far.
    """

    entries: tuple[tuple[str, int], ...] = ()
    ancilla_high_water: int = 0

    def __post_init__(self):
        merged = Counter()
        for name, count in self.entries:
            if count < 0:
                raise ValueError(f"Negative instance count for {name}")
            merged[name] += count
        object.__setattr__(
            self, "entries", tuple(sorted((k, v) for k, v in merged.items() if v))
        )

    @classmethod
    def of(cls, counts: Mapping[str, int], ancilla_high_water: int = 0):
        return cls(tuple(counts.items()), ancilla_high_water)

    @property
    def counts(self) -> dict[str, int]:
        return dict(self.entries)

    @property
    def total(self) -> int:
        return sum(count for _, count in self.entries)

    def __add__(self, other: "CostLedger") -> "CostLedger":
        return CostLedger(
            self.entries + other.entries,
            max(self.ancilla_high_water, other.ancilla_high_water),
        )

    def scaled(self, factor: int) -> "CostLedger":
        if factor < 0:
            raise ValueError("Cannot charge a negative number of uses")
        return CostLedger(
            tuple((name, count * factor) for name, count in self.entries),
            self.ancilla_high_water,
        )

    def with_high_water(self, ancillas: int) -> "CostLedger":
        return CostLedger(self.entries, max(self.ancilla_high_water, ancillas))


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    """
    A unitary U on ancillas + system qubits, ancillas most significant, with

        || A - alpha * (<0^a| (x) I) U (|0^a> (x) I) || <= epsilon
    """

    unitary: UnitaryOperator
    alpha: float
    ancillas: int
    epsilon: float
    system_qubits: int
    ledger: CostLedger = field(default_factory=CostLedger)
    tol: InitVar[Tolerances | None] = None

    def __post_init__(self, tol):
        if not self.alpha > 0:
            raise ValueError(f"Subnormalisation must be positive, got {self.alpha}")
        if self.epsilon < 0:
            raise ValueError(f"Accuracy must be non-negative, got {self.epsilon}")
        if self.ancillas < 0 or self.system_qubits < 0:
            raise ValueError("Qubit counts must be non-negative")
        if self.unitary.dim != 2 ** (self.ancillas + self.system_qubits):
            raise DimensionMismatch(
                f"Unitary of dim {self.unitary.dim} does not fit "
                f"{self.ancillas} ancillas and {self.system_qubits} system qubits"
            )
        tol = resolve(tol)
        if not is_unitary(self.unitary, tol.unitarity, tol.unitarity_dense_limit):
            raise NotUnitary("Block-encoding unitary is not unitary")

        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(
            self, "ledger", self.ledger.with_high_water(self.ancillas)
        )

    @property
    def dim(self) -> int:
        return self.unitary.dim

    @property
    def system_dim(self) -> int:
        return 2**self.system_qubits

    @property
    def matrix(self) -> ComplexMatrix:
        return ComplexMatrix(self.unitary.to_dense())

    def block(self) -> np.ndarray:
        """The top-left system block of U, without the alpha factor."""
        return self.unitary.top_left_block(self.system_dim)

    def __repr__(self):
        return (
            f"BlockEncoding(alpha={self.alpha:.6g}, ancillas={self.ancillas}, "
            f"epsilon={self.epsilon:.3g}, system_qubits={self.system_qubits})"
        )
