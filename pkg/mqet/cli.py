"""Command-line entry point: ``mqet <command> [options]``."""

# Standard Library
import argparse
import json
import logging
import sys
from collections.abc import Sequence

# MQET
from mqet import __title__, __version__
from mqet.app_settings import TOLERANCES
from mqet.models import RunConfig
from mqet.tasks import COMMANDS
from mqet.utils import ContractViolation, MqetError, UnknownBuiltin

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_CONTRACT = 4

# Per-command defaults that differ from RunConfig's
COMMAND_DEFAULTS = {
    "approx": {"function": "exp"},
    "ntca": {"function": "example", "degree_bound": 9},
}

HELP = {
    "approx": "interpolate a function on a tensor Chebyshev grid",
    "decompose": "Chebyshev product decomposition of a unit-sup polynomial",
    "qet": "eigenvalue transform of a normal matrix",
    "mqet": "eigenvalue transform of a commuting Hermitian family",
    "exp": "exponential of a normal matrix",
    "ntca": "nonlinear transform of the amplitudes of a prepared state",
}


def _degrees(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"Expected comma-separated ints: {text}"
        ) from exc


def _tolerance(text: str) -> tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"Expected NAME=VALUE, got {text}")
    return name, value


def _add_options(parser: argparse.ArgumentParser, command: str):
    defaults = {**vars(RunConfig(command)), **COMMAND_DEFAULTS.get(command, {})}
    parser.add_argument("--degree-bound", type=int, default=defaults["degree_bound"])
    parser.add_argument(
        "--vars",
        dest="factored",
        type=int,
        default=defaults["factored"],
        help="number r of Chebyshev-factored variables",
    )
    parser.add_argument("--seed", type=int, default=defaults["seed"])
    parser.add_argument(
        "--backend", choices=["dilation"], default=defaults["backend"]
    )
    parser.add_argument("--time", type=float, default=defaults["time"])
    parser.add_argument("--dim", type=int, default=defaults["dim"])
    parser.add_argument("--qubits", type=int, default=defaults["qubits"])
    parser.add_argument("--degrees", type=_degrees, default=defaults["degrees"])
    parser.add_argument("--function", default=defaults["function"])
    parser.add_argument(
        "--fixture",
        choices=["commuting", "non-commuting"],
        default=defaults["fixture"],
    )
    parser.add_argument("--trunc-degree", type=int, default=defaults["trunc_degree"])
    parser.add_argument("--in", dest="in_path", default=None)
    parser.add_argument("--out", dest="out_dir", default=None)
    parser.add_argument(
        "--tol",
        type=_tolerance,
        action="append",
        default=[],
        metavar="NAME=VAL",
        help="override one tolerance, repeatable",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mqet", description=__title__)
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        _add_options(commands.add_parser(command, help=HELP[command]), command)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    :param args: parsed command line
    :return: RunConfig with tolerance overrides applied
    """

    tolerances = TOLERANCES.override(**dict(args.tol))
    return RunConfig(
        command=args.command,
        seed=args.seed,
        degree_bound=args.degree_bound,
        factored=args.factored,
        backend=args.backend,
        time=args.time,
        dim=args.dim,
        qubits=args.qubits,
        degrees=tuple(args.degrees),
        function=args.function,
        fixture=args.fixture,
        trunc_degree=args.trunc_degree,
        in_path=args.in_path,
        out_dir=args.out_dir,
        tolerances=tolerances,
    )


def _fail(status: str, exc: Exception, failures=None) -> None:
    payload = {
        "status": status,
        "error": type(exc).__name__,
        "failures": failures if failures is not None else [str(exc)],
    }
    print(json.dumps(payload, sort_keys=True))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=args.log_level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = config_from_args(args)
    except ValueError as exc:
        _fail("usage_error", exc)
        return EXIT_USAGE

    try:
        COMMANDS[config.command](config)
    except ContractViolation as exc:
        _fail("contract_violation", exc, exc.failures)
        return EXIT_CONTRACT
    except (UnknownBuiltin, ValueError) as exc:
        _fail("usage_error", exc)
        return EXIT_USAGE
    except MqetError as exc:
        logger.error("%s failed: %s", config.command, exc)
        _fail("precondition_failed", exc)
        return EXIT_PRECONDITION

    print(json.dumps({"status": "ok", "command": config.command}, sort_keys=True))
    return EXIT_OK
