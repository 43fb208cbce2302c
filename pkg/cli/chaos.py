"""
cli/chaos.py

Date: 2026-10-18

The chaos subcommand: Gaussian or Poisson chaos bounds, the
integration-by-parts check (--ibp) and the defect trend (--trend).

Family parameters come from flags (--nu, --eps, --values, ...) filtered
by what the chosen family accepts, or from "kernel_params" in --config.
Without --nu the target ν defaults to E[F²]/2.
"""

from __future__ import annotations

import argparse
import inspect
from typing import Any, Dict

from catalog.kernel_families import GAUSS_FAMILIES, POISSON_FAMILIES
from cli.common import CommandResult, add_common_options, float_list, require
from config.settings import Settings
from controllers.chaos import ChaosController
from models.behavior.errors import ConfigurationError
from models.behavior.model_factory import ModelFactory
from models.behavior.validation import CHAOS_MODELS

DEFAULT_SAMPLES = 1_000_000

# flag dest -> family keyword
FAMILY_FLAGS = {
    "nu": "nu",
    "eps": "eps",
    "values": "values",
    "dim": "dim",
    "cells": "cells",
    "p": "p",
    "total": "total",
    "kernel_seed": "seed",
}


def family_params(model: str, family: str, params: Dict[str, Any]) -> Dict[str, Any]:
    table = GAUSS_FAMILIES if model == "gauss" else POISSON_FAMILIES
    if family not in table:
        raise ConfigurationError(f"Unknown {model} kernel family '{family}'. Known: {', '.join(table)}")
    accepted = inspect.signature(table[family]).parameters
    out = dict(params.get("kernel_params", {}))
    for flag, keyword in FAMILY_FLAGS.items():
        if keyword in accepted and params.get(flag) is not None:
            value = params[flag]
            out[keyword] = float_list(value, "--values") if keyword == "values" else value
    return out


def _functional(model: str, params: Dict[str, Any]):
    if "functional" in params:
        return ModelFactory.chaos_model(model, params["functional"])
    family = require(params, "kernel", "--kernel")
    return ModelFactory.chaos_model(model, {"family": family, "params": family_params(model, family, params)})


def cmd_chaos(params: Dict[str, Any], settings: Settings) -> CommandResult:
    controller = ChaosController(settings=settings)
    model = require(params, "model", "--model")
    if model not in CHAOS_MODELS:
        raise ConfigurationError(f"--model must be one of {', '.join(CHAOS_MODELS)}, got '{model}'")
    seed = int(params.get("seed", 0))
    n_samples = int(params.get("samples", DEFAULT_SAMPLES))

    if params.get("trend") is not None:
        if model != "gauss":
            raise ConfigurationError("--trend runs along the Gaussian perturbed family only")
        nu = float(require(params, "nu", "--nu"))
        if nu != int(nu):
            raise ConfigurationError(f"--trend needs an integer ν, got {nu}")
        result = controller.trend(int(nu), float_list(params["trend"], "--trend"), n_samples, seed)
        return CommandResult(payload=result, seed=seed)

    F = _functional(model, params)
    if params.get("ibp"):
        return CommandResult(payload=controller.ibp(F, params["ibp"], n_samples, seed), seed=seed)

    nu = params.get("nu")
    nu = F.variance() / 2.0 if nu is None else float(nu)
    result = controller.bound(F, nu, n_samples, seed, compare=bool(params.get("compare")))
    return CommandResult(payload=result, seed=seed)


def register_chaos_commands(subparsers) -> None:
    chaos = subparsers.add_parser(
        "chaos", help="Malliavin bounds for Gaussian or Poisson chaos", argument_default=argparse.SUPPRESS
    )
    add_common_options(chaos)
    chaos.add_argument("--model", choices=CHAOS_MODELS, help="gauss or poisson")
    chaos.add_argument("--kernel", help="kernel family name")
    chaos.add_argument("--nu", type=float, help="target ν (and the family's ν)")
    chaos.add_argument("--eps", type=float, help="perturbation size (gauss perturbed)")
    chaos.add_argument("--values", help="comma-separated eigenvalues (gauss eigenvalues)")
    chaos.add_argument("--dim", type=int, help="dimension (gauss identity_nu)")
    chaos.add_argument("--cells", type=int, help="number of cells (poisson)")
    chaos.add_argument("--p", type=int, help="chaos order p (poisson families)")
    chaos.add_argument("--total", type=float, help="total intensity (poisson square)")
    chaos.add_argument("--kernel-seed", dest="kernel_seed", type=int, help="seed for random kernels")
    chaos.add_argument("--samples", type=int, help="Monte Carlo sample size")
    chaos.add_argument("--seed", type=int, help="Monte Carlo seed")
    chaos.add_argument("--compare", action="store_true", help="also estimate d₂ to Z_ν from a fresh sample")
    chaos.add_argument("--ibp", help="run the integration-by-parts check with this test function")
    chaos.add_argument("--trend", help="comma-separated ε for the defect trend along the perturbed family")
    chaos.set_defaults(handler=cmd_chaos)
