"""
cli/__init__.py

Date: 2026-10-18

Command registration hub and the run loop.

Every subcommand module exposes register_*_commands(subparsers); the
parser built here is the only place that knows all of them. run() parses,
merges --config, dispatches to the handler, renders the report, archives
it when a ReportRepository is configured and maps errors to exit codes:

- 0 success
- 2 contract or configuration error (also argparse usage errors)
- 3 accuracy or resource failure
- 4 certification failure (the report is still written)
- 1 anything unexpected
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

from cli.chaos import register_chaos_commands
from cli.common import CommandResult, attach_negative_values, merge_params, run_config
from cli.dejong import register_dejong_commands
from cli.distance import register_distance_commands
from cli.stein import register_stein_commands
from config.settings import Settings
from models.behavior.errors import ConfigurationError, GammaSteinError
from models.records.run_record import RunRecord
from models.records.serialization import canonical_json, report_envelope
from models.repositories.report_repo import ReportRepository

logger = logging.getLogger(__name__)

PROG = "gamma-stein"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="Stein's method for Gamma approximation: solvers, bounds and checks"
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    register_stein_commands(subparsers)
    register_dejong_commands(subparsers)
    register_chaos_commands(subparsers)
    register_distance_commands(subparsers)
    return parser


def _render(command: str, result: CommandResult, fmt: str, config, wall_time: Optional[float]):
    envelope = report_envelope(command, result.payload, config, seed=result.seed, wall_time=wall_time)
    if fmt == "csv":
        if result.csv is None:
            raise ConfigurationError(f"'{command}' has no CSV output; use --format json")
        return envelope, result.csv
    return envelope, canonical_json(envelope)


def run(
    argv: Optional[Sequence[str]],
    settings: Settings,
    reports: Optional[ReportRepository] = None,
    stdout: Optional[TextIO] = None,
) -> int:
    """Execute one command line and return the process exit code."""
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(attach_negative_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as e:
        return int(e.code or 0)

    flags = vars(args)
    command = args.command
    started = time.perf_counter()
    try:
        params = merge_params(args)
        run_settings = settings.with_threads(flags.get("threads"))
        result: CommandResult = args.handler(params, run_settings)
        wall_time = time.perf_counter() - started
        config = run_config(params)
        fmt = flags.get("format") or result.default_format
        envelope, text = _render(command, result, fmt, config, wall_time if flags.get("timing") else None)

        output = flags.get("output")
        if output:
            Path(output).write_text(text, encoding="utf-8")
            logger.info("wrote %s report to %s", command, output)
        else:
            stdout.write(text)

        if reports is not None:
            record = RunRecord.create(command, config, result.seed, envelope, result.exit_code, wall_time)
            reports.add(record)
            logger.info("archived run %s", record.run_id)
        if result.message:
            logger.error("%s: %s", command, result.message)
        return result.exit_code
    except GammaSteinError as e:
        logger.error("%s failed: %s", command, e)
        return e.exit_code
    except Exception:
        logger.exception("%s failed unexpectedly", command)
        return 1
