"""
cli/stein.py

Date: 2026-10-18

The solve and certify subcommands.
"""

from __future__ import annotations

import argparse
from typing import Any, Dict

from cli.common import CommandResult, add_common_options, float_list, require, str_list
from config.settings import Settings
from controllers.stein import SOLVE_COLUMNS, SteinController, centered_targets, gamma_targets
from models.behavior.errors import ConfigurationError
from models.domain.gamma_params import CenteredGammaParams, GammaParams
from models.records.serialization import rows_to_csv
from models.records.stein import GridSpec

DEFAULT_R = "0.5,1,2,5"
DEFAULT_LAMBDA = "1"
TARGETS = ("gamma", "centered")


def _grid(params: Dict[str, Any]) -> GridSpec:
    text = params.get("grid")
    if text is None:
        return GridSpec()
    try:
        return GridSpec.parse(str(text))
    except ValueError as e:
        raise ConfigurationError(str(e)) from e


def _target(params: Dict[str, Any]):
    kind = params.get("target", "gamma")
    if kind not in TARGETS:
        raise ConfigurationError(f"--target must be one of {', '.join(TARGETS)}, got '{kind}'")
    if kind == "centered":
        return CenteredGammaParams(float(require(params, "nu", "--nu")))
    return GammaParams(float(params.get("r", 1.0)), float(params.get("lam", 1.0)))


def cmd_solve(params: Dict[str, Any], settings: Settings) -> CommandResult:
    controller = SteinController(settings=settings)
    result = controller.solve(require(params, "h", "--h"), _target(params), _grid(params))
    return CommandResult(
        payload=result,
        csv=rows_to_csv(SOLVE_COLUMNS, controller.solve_rows(result)),
    )


def cmd_certify(params: Dict[str, Any], settings: Settings) -> CommandResult:
    controller = SteinController(settings=settings)
    if params.get("explosion"):
        report = controller.explosion(float_list(params.get("r", DEFAULT_R), "--r"))
        failed = not report["passed"]
        return CommandResult(
            payload=report,
            exit_code=4 if failed else 0,
            message="explosion witness stayed below e^{-1/2}/r" if failed else None,
        )

    h_names = str_list(params["h"], "--h") if params.get("h") else None
    targets = []
    if params.get("nu") is not None:
        targets.extend(centered_targets(float_list(params["nu"], "--nu")))
    if params.get("nu") is None or params.get("r") is not None:
        targets.extend(
            gamma_targets(
                float_list(params.get("r", DEFAULT_R), "--r"),
                float_list(params.get("lam", DEFAULT_LAMBDA), "--lambda"),
            )
        )
    report = controller.certify(h_names, targets, _grid(params), second_order=not params.get("first_order"))
    return CommandResult(
        payload=report,
        exit_code=0 if report["passed"] else 4,
        message=None if report["passed"] else "bound violations: " + ", ".join(report["failed"]),
    )


def register_stein_commands(subparsers) -> None:
    solve = subparsers.add_parser(
        "solve", help="solve a Stein equation on a grid", argument_default=argparse.SUPPRESS
    )
    add_common_options(solve)
    solve.add_argument("--h", help="test function name")
    solve.add_argument("--target", choices=TARGETS, help="gamma (r, λ) or centered (ν)")
    solve.add_argument("--r", type=float, help="shape r of Γ(r, λ)")
    solve.add_argument("--lambda", dest="lam", type=float, help="rate λ of Γ(r, λ)")
    solve.add_argument("--nu", type=float, help="ν of the centered target")
    solve.add_argument("--grid", help="lo:hi:step")
    solve.set_defaults(handler=cmd_solve)

    certify = subparsers.add_parser(
        "certify", help="check solution bounds over test functions", argument_default=argparse.SUPPRESS
    )
    add_common_options(certify)
    certify.add_argument("--h", help="comma-separated test functions (default: the whole dictionary)")
    certify.add_argument("--r", help="comma-separated shapes")
    certify.add_argument("--lambda", dest="lam", help="comma-separated rates")
    certify.add_argument("--nu", help="comma-separated ν for centered targets")
    certify.add_argument("--grid", help="lo:hi:step")
    certify.add_argument("--first-order", action="store_true", help="skip the f′ Lipschitz bounds")
    certify.add_argument("--explosion", action="store_true", help="evaluate the explosion witness for each --r")
    certify.set_defaults(handler=cmd_certify)
