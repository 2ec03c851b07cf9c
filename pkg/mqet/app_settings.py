"""App settings."""

# Standard Library
import dataclasses
import logging
import os
from dataclasses import dataclass
from pathlib import Path

# Third Party
import yaml

logger = logging.getLogger(__name__)

SETTINGS_ENV_VAR = "MQET_SETTINGS"


@dataclass(frozen=True)
class Tolerances:
    """
    Every numerical threshold used by the toolkit.
    """

    unitarity: float = 1e-10
    dilation_unitarity: float = 1e-9
    normality: float = 1e-8
    hermiticity: float = 1e-8
    commutation: float = 1e-8
    mqet_commutation: float = 1e-7
    joint_diagonalization: float = 1e-7
    split_normality: float = 1e-6
    norm_slack: float = 1e-12
    poly_bound_slack: float = 1e-9
    sup_slack: float = 1e-6
    spectrum_slack: float = 1e-9
    zero_probability: float = 1e-14
    node_gap: float = 1e-10
    zero_term_ratio: float = 1e-12
    rank_ratio: float = 1e-9
    exp_truncation_target: float = 1e-6
    max_exp_time: float = 4.0
    diagonalization_retries: int = 5
    unitarity_dense_limit: int = 1024
    workers: int = 1

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value < 0:
                raise ValueError(f"Tolerance {field.name} must be non-negative")

        if self.diagonalization_retries < 1 or self.workers < 1:
            raise ValueError("Retries and workers must be at least 1")

    def override(self, **values) -> "Tolerances":
        """
        Copy with some fields replaced, casting values to the field type.

        :param values: field name to new value
        :return: new Tolerances
        """

        known = {field.name: field.type for field in dataclasses.fields(self)}
        changes = {}
        for name, value in values.items():
            if name not in known:
                raise ValueError(f"Unknown tolerance {name}")
            cast = int if known[name] in (int, "int") else float
            changes[name] = cast(value)

        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def for_dilations(self) -> "Tolerances":
        """Copy whose unitarity check accepts anything a dilation may emit."""
        return dataclasses.replace(
            self, unitarity=max(self.unitarity, self.dilation_unitarity)
        )


def load_tolerances(path: str | Path | None = None) -> Tolerances:
    """
    Load tolerances from a YAML mapping, falling back to the defaults.

    :param path: YAML file, or None for defaults
    :return: Tolerances
    """

    if path is None:
        return Tolerances()

    with open(path, encoding="utf-8") as stream:
        data = yaml.safe_load(stream) or {}

    if not isinstance(data, dict):
        raise ValueError(f"Settings file {path} must hold a mapping")

    logger.debug("Loaded %s tolerance overrides from %s", len(data), path)
    return Tolerances().override(**data)


def resolve(tol: Tolerances | None) -> Tolerances:
    return TOLERANCES if tol is None else tol


TOLERANCES = load_tolerances(os.environ.get(SETTINGS_ENV_VAR))
