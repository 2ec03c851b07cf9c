"""Tasks."""

# Standard Library
import logging
from pathlib import Path

# Third Party
import numpy as np

# MQET
from mqet import __version__
from mqet.approx import (
    builtin_function,
    jackson_bound_2d,
    jackson_bound_dd,
    sup_norm_bound,
    sup_norm_estimate,
    tensor_interpolate,
)
from mqet.blockenc import dilate, extract_block
from mqet.decomp import (
    decompose_multivariate,
    good_scaling_bound,
    nonzero_term_count,
    normalize,
    rank_certificate,
    subnormalization_bounds,
)
from mqet.fixtures import (
    non_commuting_pair,
    random_commuting_hermitians,
    random_normal,
    random_prepare_oracle,
    random_unit_sup_polymv,
    rng_for,
)
from mqet.matrices import matrix_function_oracle, operator_norm
from mqet.models import (
    CostReport,
    PolyMV,
    PrepareOracle,
    RunConfig,
    StateVector,
    as_array,
)
from mqet.ntca import ntca_transform
from mqet.qet import exp_normal, exp_truncation_bound, mqet, qet_normal, run_on_state
from mqet.serializers import (
    decomposition_to_list,
    matrix_from_dict,
    polymv_from_dict,
    polymv_to_dict,
    read_json,
    report_to_dict,
    state_to_dict,
    write_betas_csv,
    write_json,
)
from mqet.utils import ContractViolation, UnknownBuiltin

logger = logging.getLogger(__name__)

ERROR_GRID = 100
RECONSTRUCTION_GRID = {2: 64, 3: 16}
RECONSTRUCTION_TOLERANCE = 1e-8
STATE_TOLERANCE = 1e-6
CONTRACT_SLACK = 1e-8


def _out_dir(config: RunConfig) -> Path:
    return Path(config.out_dir or ".")


def _finish(config: RunConfig, payload: dict, failures: list[str]) -> int:
    """
    Write report.json for a run; raise ContractViolation if any check failed.

    :return: 0 when every claimed contract held
    """

    payload = {
        "command": config.command,
        "version": __version__,
        "config": config.as_dict(),
        "status": "contract_violation" if failures else "ok",
        "failures": failures,
        **payload,
    }
    path = write_json(_out_dir(config) / "report.json", payload)
    logger.info("Report written to %s", path)

    if failures:
        for failure in failures:
            logger.warning("%s: %s", config.command, failure)
        raise ContractViolation(f"{len(failures)} contract checks failed", failures)
    return 0


def _read_polymv(config: RunConfig) -> PolyMV | None:
    if config.in_path is None:
        return None
    return polymv_from_dict(read_json(config.in_path))


def _read_matrix(config: RunConfig):
    if config.in_path is None:
        return None
    return as_array(matrix_from_dict(read_json(config.in_path)))


def _grid(num_vars: int, points: int) -> list[np.ndarray]:
    axis = np.linspace(-1.0, 1.0, points)
    return np.meshgrid(*[axis] * num_vars, indexing="ij")


def cmd_approx(config: RunConfig) -> int:
    """
    Interpolate a builtin function on a tensor Chebyshev grid and compare the
    measured error with the Jackson bound; "poly" passes a PolyMV file through.
    """

    logger.info("Running approx for %s", config.function)
    out = _out_dir(config)

    if config.function == "poly":
        p = _read_polymv(config)
        if p is None:
            raise UnknownBuiltin("The poly builtin needs a PolyMV file via --in")
        write_json(out / "poly.json", polymv_to_dict(p))
        return _finish(
            config,
            {"degree_bounds": list(p.degree_bounds), "sup_estimate": sup_norm_estimate(p)},
            [],
        )

    f = builtin_function(config.function)
    degrees = tuple(config.degrees)
    p = tensor_interpolate(f, degrees, config.tolerances)
    write_json(out / "poly.json", polymv_to_dict(p))

    grid = _grid(f.arity, ERROR_GRID)
    measured = float(np.max(np.abs(f(*grid) - p(*grid))))
    payload = {"measured_sup_error": measured, "sup_estimate": sup_norm_estimate(p)}

    failures = []
    if f.smoothness is not None:
        if len(degrees) == 2:
            bound = jackson_bound_2d(f.smoothness, f.derivative_bound, *degrees)
        else:
            bound = jackson_bound_dd(f.smoothness, f.derivative_bound, degrees)
        payload["jackson_bound"] = bound
        if measured > bound:
            failures.append(f"interpolation error {measured:.3e} exceeds {bound:.3e}")
    else:
        logger.info("%s declares no smoothness, reporting the error only", f.name)

    return _finish(config, payload, failures)


def cmd_decompose(config: RunConfig) -> int:
    """
    Chebyshev product decomposition of a unit-sup polynomial, with the good
    scaling, subnormalisation and rank checks.
    """

    rng = rng_for(config.seed)
    degree_bound = config.degree_bound
    g = _read_polymv(config)
    if g is None:
        g = random_unit_sup_polymv(config.factored + 1, degree_bound, rng)
    logger.info("Running decompose, %s variables, D=%s", g.num_vars, degree_bound)

    tol = config.tolerances
    decomposition = decompose_multivariate(g, degree_bound)
    normalized = normalize(decomposition, tol)
    out = _out_dir(config)
    write_betas_csv(out / "betas.csv", decomposition)
    write_json(out / "decomposition.json", decomposition_to_list(decomposition))

    grid = _grid(g.num_vars, RECONSTRUCTION_GRID.get(g.num_vars, 8))
    reconstruction = float(np.max(np.abs(decomposition(*grid) - g(*grid))))
    unit_sup = sup_norm_bound(g) <= 1 + tol.sup_slack
    beta_l1 = decomposition.beta_l1
    max_tail = max(float(term.beta) for term in decomposition.terms)

    failures = []
    if reconstruction > RECONSTRUCTION_TOLERANCE:
        failures.append(f"reconstruction error {reconstruction:.3e}")

    payload = {
        "beta_l1": beta_l1,
        "max_tail_sup": max_tail,
        "nonzero_terms": nonzero_term_count(decomposition, tol),
        "normalized_terms": len(normalized.terms),
        "reconstruction_error": reconstruction,
        "unit_sup": unit_sup,
    }

    if g.num_vars == 2:
        bound = good_scaling_bound(degree_bound)
        payload["good_scaling_bound"] = bound
        payload["rank_certificate"] = rank_certificate(g, degree_bound, tol)
        if unit_sup and beta_l1 > bound + tol.sup_slack:
            failures.append(f"||beta||_1 = {beta_l1:.6g} exceeds 2D = {bound:g}")
        if unit_sup and max_tail > 2 + tol.sup_slack:
            failures.append(f"a tail reaches sup norm {max_tail:.6g} > 2")
    else:
        bounds = subnormalization_bounds(degree_bound, decomposition.num_factored)
        payload["subnormalization_bounds"] = bounds
        payload["bound_holds"] = {k: beta_l1 <= v + tol.sup_slack for k, v in bounds.items()}
        if unit_sup and not payload["bound_holds"]["provable"]:
            failures.append(
                f"||beta||_1 = {beta_l1:.6g} exceeds (2D-1)^r = {bounds['provable']}"
            )

    return _finish(config, payload, failures)


def _state_check(result, oracle, size: int, tol, failures: list[str]) -> dict:
    """Run on the uniform state and compare with the oracle's output state."""

    state = StateVector.uniform(size)
    output, probability = run_on_state(result, state, tol)
    expected = as_array(oracle) @ as_array(state)
    expected = expected / np.linalg.norm(expected)
    overlap = abs(np.vdot(expected, as_array(output)))
    if overlap < 1 - STATE_TOLERANCE:
        failures.append(f"output state fidelity {overlap:.9f}")
    return {"success_probability": probability, "state_fidelity": float(overlap)}


def cmd_qet(config: RunConfig) -> int:
    """Transform a random or supplied normal matrix by a random unit-sup g."""

    rng = rng_for(config.seed)
    tol = config.tolerances
    m = _read_matrix(config)
    if m is None:
        m = random_normal(config.dim, rng)
    g = random_unit_sup_polymv(2, config.degree_bound, rng)
    logger.info("Running qet on a %s x %s matrix", *m.shape)

    be_m = dilate(m, 1.0, oracle="U_M", tol=tol)
    result = qet_normal(be_m, g, config.degree_bound, tol)
    write_betas_csv(_out_dir(config) / "betas.csv", result.decomposition)

    oracle = matrix_function_oracle([m], lambda z: g(z.real, z.imag), tol)
    report = result.report
    failures = report.failures(CONTRACT_SLACK)
    if not report.tally_matches.get("2m+4+d", False):
        failures.append(
            f"{report.ancillas_used} ancillas, tally 2m+4+d gives "
            f"{report.ancilla_tallies['2m+4+d']}"
        )

    payload = {
        "report": report_to_dict(report),
        "state": _state_check(result, oracle, m.shape[0], tol, failures),
    }
    return _finish(config, payload, failures)


def cmd_mqet(config: RunConfig) -> int:
    """Transform a seeded commuting (or deliberately non-commuting) family."""

    rng = rng_for(config.seed)
    tol = config.tolerances
    count = config.factored + 1
    if config.fixture == "commuting":
        family = random_commuting_hermitians(config.dim, count, rng)
    elif config.fixture == "non-commuting":
        family = non_commuting_pair(config.dim, rng)
        family += random_commuting_hermitians(config.dim, count - 2, rng)
    else:
        raise UnknownBuiltin(f"Unknown fixture {config.fixture!r}")
    g = random_unit_sup_polymv(count, config.degree_bound, rng)
    logger.info("Running mqet on %s matrices of dim %s", count, config.dim)

    encodings = [
        dilate(a, 1.0, oracle=f"U_A{k}", tol=tol) for k, a in enumerate(family)
    ]
    result = mqet(encodings, g, config.degree_bound, tol)
    write_betas_csv(_out_dir(config) / "betas.csv", result.decomposition)

    oracle = matrix_function_oracle(family, lambda *x: g(*x), tol)
    failures = result.report.failures(CONTRACT_SLACK)
    payload = {
        "report": report_to_dict(result.report),
        "state": _state_check(result, oracle, config.dim, tol, failures),
    }
    return _finish(config, payload, failures)


def cmd_exp(config: RunConfig) -> int:
    """e^{Mt} via the Hermitian/anti-Hermitian split, checked by diagonalization."""

    rng = rng_for(config.seed)
    tol = config.tolerances
    m = _read_matrix(config)
    if m is None:
        m = random_normal(config.dim, rng)
    t = config.time
    logger.info("Running exp, t=%s, degree %s", t, config.trunc_degree)

    be = exp_normal(dilate(m, 1.0, oracle="U_M", tol=tol), t, config.trunc_degree, tol)
    oracle = matrix_function_oracle([m], lambda z: np.exp(z * t), tol)
    measured = operator_norm(as_array(extract_block(be)) - as_array(oracle))

    report = CostReport(
        oracle_instances=be.ledger.counts,
        ancillas_used=be.ancillas,
        subnormalization=be.alpha,
        epsilon_claimed=be.epsilon,
        epsilon_measured=measured,
        extra={"truncation_bound": exp_truncation_bound(t, config.trunc_degree)},
    )
    return _finish(
        config, {"report": report_to_dict(report)}, report.failures(CONTRACT_SLACK)
    )


def ntca_functions() -> dict[str, PolyMV]:
    """Bivariate F(x, y) used by the amplitude transform, all with |F| <= 1."""

    identity = np.zeros((2, 2), dtype=complex)
    identity[1, 0] = 1 / np.sqrt(2)
    identity[0, 1] = 1j / np.sqrt(2)

    example = np.zeros((7, 9), dtype=complex)
    example[6, 4] = 5
    example[1, 8] = 17
    example = PolyMV(example)

    return {
        "identity": PolyMV(identity),
        "example": example.scaled(1 / sup_norm_bound(example)),
        "constant": PolyMV([[0.5]]),
    }


def cmd_ntca(config: RunConfig) -> int:
    """Transform the amplitudes of a prepared state and compare with brute force."""

    functions = ntca_functions()
    if config.function not in functions:
        raise UnknownBuiltin(
            f"Unknown amplitude function {config.function!r}, "
            f"expected one of {sorted(functions)}"
        )
    f = functions[config.function]

    tol = config.tolerances
    matrix = _read_matrix(config)
    if matrix is None:
        prepare = random_prepare_oracle(config.qubits, rng_for(config.seed))
    else:
        prepare = PrepareOracle(matrix, tol=tol)
    logger.info("Running ntca with %s on %s qubits", config.function, prepare.num_qubits)

    state, report = ntca_transform(prepare, f, config.degree_bound, tol)
    write_json(_out_dir(config) / "state.json", state_to_dict(state))

    failures = report.failures(CONTRACT_SLACK)
    if report.extra["state_error"] > STATE_TOLERANCE:
        failures.append(f"state error {report.extra['state_error']:.3e}")
    return _finish(config, {"report": report_to_dict(report)}, failures)


COMMANDS = {
    "approx": cmd_approx,
    "decompose": cmd_decompose,
    "qet": cmd_qet,
    "mqet": cmd_mqet,
    "exp": cmd_exp,
    "ntca": cmd_ntca,
}
