"""
cli/dejong.py

Date: 2026-10-18

The hoeffding and dejong subcommands (product-space models).

A model comes either from --family/--n (plus "params" in --config) or
from a "model" object in --config, in any shape ModelFactory accepts.
"""

from __future__ import annotations

import argparse
from typing import Any, Dict

from cli.common import CommandResult, add_common_options, int_list, require
from config.settings import Settings
from controllers.dejong import DeJongController
from models.behavior.dejong import DEFAULT_MC_SAMPLES, POLICIES
from models.behavior.errors import ConfigurationError
from models.behavior.model_factory import ModelFactory
from models.records.serialization import records_to_csv

ACTIONS = ("demo", "bound")
MODES = ("exact", "mc")


def _model(params: Dict[str, Any]):
    if "model" in params:
        return ModelFactory.product_model(params["model"])
    family = require(params, "family", "--family")
    n_list = int_list(require(params, "n", "--n"), "--n")
    if len(n_list) != 1:
        raise ConfigurationError("a single model needs one value of --n")
    return ModelFactory.product_model({"family": family, "n": n_list[0], "params": params.get("params", {})})


def cmd_hoeffding(params: Dict[str, Any], settings: Settings) -> CommandResult:
    controller = DeJongController(settings=settings)
    max_order = params.get("max_order")
    result = controller.decompose(
        _model(params),
        max_order=None if max_order is None else int(max_order),
        exact=bool(params.get("exact")),
        oracle=bool(params.get("oracle")),
    )
    return CommandResult(payload=result)


def cmd_dejong(params: Dict[str, Any], settings: Settings) -> CommandResult:
    controller = DeJongController(settings=settings)
    action = params.get("action", "demo")
    seed = int(params.get("seed", 0))
    n_samples = int(params.get("samples", DEFAULT_MC_SAMPLES))
    nu = params.get("nu")

    if action == "bound":
        c_d = params.get("c_d")
        result = controller.bound(
            _model(params),
            nu=None if nu is None else float(nu),
            c_d=None if c_d is None else float(c_d),
            policy=params.get("policy", "exact"),
            mode=params.get("mode", "exact"),
            seed=seed,
            n_samples=n_samples,
            checks=bool(params.get("checks")),
        )
        return CommandResult(payload=result, seed=seed if params.get("mode") == "mc" else None)
    if action != "demo":
        raise ConfigurationError(f"--action must be one of {', '.join(ACTIONS)}, got '{action}'")

    rows = controller.demo(
        require(params, "family", "--family"),
        int_list(require(params, "n", "--n"), "--n"),
        nu=None if nu is None else float(nu),
        seed=seed,
        family_params=params.get("params"),
        n_samples=n_samples,
        exact_only=bool(params.get("exact_only")),
    )
    return CommandResult(payload={"rows": rows}, seed=seed, csv=records_to_csv(rows), default_format="csv")


def register_dejong_commands(subparsers) -> None:
    hoeff = subparsers.add_parser(
        "hoeffding", help="Hoeffding decomposition of a product-space kernel", argument_default=argparse.SUPPRESS
    )
    add_common_options(hoeff)
    hoeff.add_argument("--family", help="kernel family")
    hoeff.add_argument("--n", help="number of coordinates")
    hoeff.add_argument("--max-order", type=int, help="largest |J| to compute")
    hoeff.add_argument("--exact", action="store_true", help="rational arithmetic")
    hoeff.add_argument("--oracle", action="store_true", help="cross-check with sequential projections")
    hoeff.set_defaults(handler=cmd_hoeffding)

    dj = subparsers.add_parser(
        "dejong", help="de Jong bound and convergence demo", argument_default=argparse.SUPPRESS
    )
    add_common_options(dj)
    dj.add_argument("--action", choices=ACTIONS, help="convergence demo (default) or one bound")
    dj.add_argument("--family", help="kernel family")
    dj.add_argument("--n", help="comma-separated n (one value for --action bound)")
    dj.add_argument("--nu", type=float, help="target ν")
    dj.add_argument("--mode", choices=MODES, help="exact enumeration or Monte Carlo pair statistics")
    dj.add_argument("--policy", choices=POLICIES, help="how the fourth-moment term is bounded")
    dj.add_argument("--c-d", dest="c_d", type=float, help="fourth-moment constant for --policy require")
    dj.add_argument("--samples", type=int, help="Monte Carlo sample size")
    dj.add_argument("--seed", type=int, help="Monte Carlo seed")
    dj.add_argument("--exact-only", action="store_true", help="fail instead of switching to Monte Carlo")
    dj.add_argument("--checks", action="store_true", help="also run the moment-identity and chain checks")
    dj.set_defaults(handler=cmd_dejong)
