"""
JSON and CSV formats for matrices, polynomials, encodings and reports.

Every ``*_to_dict`` has a matching ``*_from_dict``; ``write_json`` dumps with
sorted keys so identical runs produce identical files.
"""

# Standard Library
import csv
import json
import logging
from pathlib import Path

# Third Party
import numpy as np

# MQET
from mqet.app_settings import Tolerances
from mqet.decomp import chebyshev_product
from mqet.models import (
    BlockEncoding,
    ComplexMatrix,
    CostLedger,
    CostReport,
    DecompositionTerm,
    Poly1,
    PolyMV,
    ProductDecomposition,
    StateVector,
    as_array,
)
from mqet.operators import DenseOperator
from mqet.utils import DimensionMismatch, is_power_of_two

logger = logging.getLogger(__name__)


def _split(values: np.ndarray) -> dict:
    flat = np.asarray(values, dtype=complex).ravel()
    return {"re": flat.real.tolist(), "im": flat.imag.tolist()}


def _join(data: dict, size: int) -> np.ndarray:
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data.get("im", np.zeros(len(re))), dtype=float)
    if re.shape != (size,) or im.shape != (size,):
        raise DimensionMismatch(f"Expected {size} real and imaginary parts")
    return re + 1j * im


def matrix_to_dict(matrix) -> dict:
    array = as_array(matrix)
    return {"dim": array.shape[0], **_split(array)}


def matrix_from_dict(data: dict, operator: bool = True) -> ComplexMatrix:
    """
    :param data: ``{"dim": N, "re": [...], "im": [...]}``, row-major
    :param operator: reject dims that are not a power of two
    :return: ComplexMatrix
    """

    dim = int(data["dim"])
    if operator and not is_power_of_two(dim):
        raise DimensionMismatch(f"Operator dim {dim} is not a power of two")
    return ComplexMatrix(_join(data, dim * dim).reshape(dim, dim))


def state_to_dict(state) -> dict:
    array = as_array(state)
    return {"dim": array.shape[0], **_split(array)}


def state_from_dict(data: dict, operator: bool = True) -> StateVector:
    dim = int(data["dim"])
    if operator and not is_power_of_two(dim):
        raise DimensionMismatch(f"State dim {dim} is not a power of two")
    return StateVector(_join(data, dim))


def poly1_to_dict(p: Poly1, basis: str = "monomial") -> dict:
    """Poly1 in the monomial basis, or converted to the Chebyshev basis."""

    if basis == "monomial":
        coefficients = p.coefficients
    elif basis == "chebyshev":
        coefficients = np.polynomial.chebyshev.poly2cheb(p.coefficients)
    else:
        raise ValueError(f"Unknown basis {basis!r}")
    return {"basis": basis, **_split(coefficients)}


def poly1_from_dict(data: dict) -> Poly1:
    coefficients = _join(data, len(data["re"]))
    basis = data.get("basis", "monomial")
    if basis == "chebyshev":
        coefficients = np.polynomial.chebyshev.cheb2poly(coefficients)
    elif basis != "monomial":
        raise ValueError(f"Unknown basis {basis!r}")
    return Poly1(coefficients)


def polymv_to_dict(p: PolyMV) -> dict:
    return {
        "num_vars": p.num_vars,
        "degree_bounds": list(p.degree_bounds),
        **_split(p.coefficients),
    }


def polymv_from_dict(data: dict) -> PolyMV:
    bounds = tuple(int(b) for b in data["degree_bounds"])
    if len(bounds) != int(data["num_vars"]):
        raise DimensionMismatch("degree_bounds must have num_vars entries")
    return PolyMV(_join(data, int(np.prod(bounds))).reshape(bounds))


def be_to_dict(be: BlockEncoding) -> dict:
    return {
        **matrix_to_dict(be.matrix),
        "alpha": be.alpha,
        "ancillas": be.ancillas,
        "epsilon": be.epsilon,
        "system_qubits": be.system_qubits,
        "ledger": be.ledger.counts,
    }


def be_from_dict(data: dict, tol: Tolerances | None = None) -> BlockEncoding:
    matrix = matrix_from_dict(data)
    return BlockEncoding(
        DenseOperator(as_array(matrix)),
        float(data["alpha"]),
        int(data["ancillas"]),
        float(data["epsilon"]),
        int(data["system_qubits"]),
        CostLedger.of({k: int(v) for k, v in data.get("ledger", {}).items()}),
        tol=tol,
    )


def decomposition_to_list(decomposition: ProductDecomposition) -> list[dict]:
    return [
        {
            "s": list(term.index),
            "Q": poly1_to_dict(decomposition.effective_tail(term)),
            "beta": term.beta,
        }
        for term in decomposition.terms
    ]


def decomposition_from_list(
    items: list[dict], degree_bound: int
) -> ProductDecomposition:
    """Rebuild an un-normalised decomposition; Q carries its own scale."""

    terms = tuple(
        DecompositionTerm(tuple(item["s"]), poly1_from_dict(item["Q"]), item["beta"])
        for item in items
    )
    if not terms:
        raise ValueError("A decomposition file needs at least one term")
    return ProductDecomposition(len(terms[0].index), degree_bound, terms)


def report_to_dict(report: CostReport) -> dict:
    """The five core fields plus whatever optional fields were filled in."""

    data = {
        "instances": report.oracle_instances,
        "ancillas": report.ancillas_used,
        "subnorm": report.subnormalization,
        "eps_claimed": report.epsilon_claimed,
        "eps_measured": report.epsilon_measured,
    }
    optional = {
        "input_instances": report.input_instances,
        "instance_bound": report.instance_bound,
        "ancilla_tallies": report.ancilla_tallies,
        "tally_matches": report.tally_matches,
        "eps_closed_form": report.epsilon_closed_form,
        "backend_subnorm": report.backend_subnormalization,
        "beta_l1": report.beta_l1,
    }
    data.update({k: v for k, v in optional.items() if v not in (None, {})})
    data.update(report.extra)
    return data


def _builtin(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialise {type(value).__name__}")


def write_json(path: str | Path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, sort_keys=True, indent=2, default=_builtin)
    path.write_text(text + "\n", encoding="utf-8")
    logger.debug("Wrote %s", path)
    return path


def read_json(path: str | Path):
    with open(path, encoding="utf-8") as stream:
        return json.load(stream)


def write_betas_csv(path: str | Path, decomposition: ProductDecomposition) -> Path:
    """One row per term: s_0..s_{r-1}, a readable product label, beta_s."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = [f"s{k}" for k in range(decomposition.num_factored)] + ["term", "beta"]
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for term in decomposition.terms:
            label = chebyshev_product(term.index)
            writer.writerow([*term.index, label, repr(float(term.beta))])
    logger.debug("Wrote %s betas to %s", len(decomposition.terms), path)
    return path


def read_betas_csv(path: str | Path) -> list[tuple[tuple[int, ...], float]]:
    with open(path, newline="", encoding="utf-8") as stream:
        rows = list(csv.reader(stream))
    return [(tuple(int(s) for s in row[:-2]), float(row[-1])) for row in rows[1:]]
