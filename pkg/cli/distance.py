"""
cli/distance.py

Date: 2026-10-18

The distance subcommand: a sample file against Z_ν or against a second
sample file.
"""

from __future__ import annotations

import argparse
from typing import Any, Dict

from cli.common import CommandResult, add_common_options, require
from config.settings import Settings
from controllers.distance import DistanceController, load_samples


def cmd_distance(params: Dict[str, Any], settings: Settings) -> CommandResult:
    controller = DistanceController(settings=settings)
    samples = load_samples(require(params, "samples", "--samples"))
    other = load_samples(params["other"]) if params.get("other") else None
    weights = load_samples(params["weights"]) if params.get("weights") else None
    nu = params.get("nu")
    result = controller.compare(samples, None if nu is None else float(nu), other, weights)
    return CommandResult(payload=result)


def register_distance_commands(subparsers) -> None:
    dist = subparsers.add_parser(
        "distance", help="distances between a sample and Z_ν", argument_default=argparse.SUPPRESS
    )
    add_common_options(dist)
    dist.add_argument("--samples", help="sample file (.json, .npy, .csv or whitespace-separated)")
    dist.add_argument("--nu", type=float, help="compare with the centered Gamma Z_ν")
    dist.add_argument("--other", help="compare with a second sample file instead")
    dist.add_argument("--weights", help="probability weights for --samples (same formats)")
    dist.set_defaults(handler=cmd_distance)
