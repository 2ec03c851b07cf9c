"""Report and run configuration value types."""

# Standard Library
import dataclasses
from dataclasses import dataclass, field

# MQET
from mqet.app_settings import Tolerances
from mqet.models.decomposition import ProductDecomposition
from mqet.models.encodings import BlockEncoding

__all__ = ["CostReport", "QetResult", "RunConfig"]


@dataclass(frozen=True)
class CostReport:
    """
    Resources charged by a transform, next to the accuracy actually achieved.

    ``subnormalization`` is the charged figure (alpha^2 ||beta||_1 for the
    normal case); ``backend_subnormalization`` is what the dilation backend
    emitted. ``input_instances`` counts uses of the input block-encodings
    and is what ``instance_bound`` limits.
    """

    oracle_instances: dict[str, int]
    ancillas_used: int
    subnormalization: float
    epsilon_claimed: float
    epsilon_measured: float
    input_instances: int | None = None
    instance_bound: int | None = None
    ancilla_tallies: dict[str, int] = field(default_factory=dict)
    tally_matches: dict[str, bool] = field(default_factory=dict)
    epsilon_closed_form: float | None = None
    backend_subnormalization: float | None = None
    beta_l1: float | None = None
    extra: dict[str, float] = field(default_factory=dict)

    def failures(self, slack: float = 1e-8) -> list[str]:
        """Contract checks that do not hold, as readable strings."""

        out = []
        if self.epsilon_measured > self.epsilon_claimed + slack:
            out.append(
                f"measured error {self.epsilon_measured:.3e} exceeds "
                f"claimed {self.epsilon_claimed:.3e}"
            )
        if self.instance_bound is not None and self.input_instances is not None:
            if self.input_instances > self.instance_bound:
                out.append(
                    f"{self.input_instances} oracle instances exceed "
                    f"the bound {self.instance_bound}"
                )
        return out


@dataclass(frozen=True, eq=False)
class QetResult:
    block_encoding: BlockEncoding
    report: CostReport
    decomposition: ProductDecomposition | None = None


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run depends on; embedded verbatim in its report."""

    command: str
    seed: int = 0
    degree_bound: int = 4
    factored: int = 1
    backend: str = "dilation"
    time: float = 1.0
    dim: int = 8
    qubits: int = 2
    degrees: tuple[int, ...] = (8, 8)
    function: str = "exp"
    fixture: str = "commuting"
    trunc_degree: int = 16
    in_path: str | None = None
    out_dir: str | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.degree_bound < 1 or any(n < 1 for n in self.degrees):
            raise ValueError("Degrees must be at least 1")
        if self.factored < 1:
            raise ValueError("At least one variable must be factored")
        if self.backend != "dilation":
            raise ValueError(f"Unknown backend {self.backend!r}")

    def as_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["degrees"] = list(self.degrees)
        return data
