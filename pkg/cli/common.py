"""
cli/common.py

Date: 2026-10-18

Pieces shared by every subcommand: the common options, config-file
loading, flag/config merging, list parsing and the CommandResult handed
back to cli.run().

Design notes:
- Subparsers use argparse.SUPPRESS as the default, so only flags the user
  actually typed show up in the namespace. A flag overrides the same key
  from --config; anything absent from both falls back to the handler's
  default.
"""

from __future__ import annotations

import argparse
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from models.behavior.errors import ConfigurationError

FORMATS = ("json", "csv")

# keys that steer the CLI itself and are not part of a run's config
CLI_KEYS = frozenset({"config", "output", "format", "timing", "threads", "handler", "command"})

# a value, not an option: "-" then a digit or "."
NEGATIVE_VALUE = re.compile(r"^-[0-9.]")


def attach_negative_values(argv: Sequence[str]) -> List[str]:
    """
    Rewrite "--flag -2:2:0.5" as "--flag=-2:2:0.5".

    argparse reads a token starting with "-" as an option unless it is a
    plain negative number, so ranges and lists with a negative first
    entry would otherwise fail as usage errors.
    """
    out: List[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        if (
            token.startswith("--")
            and "=" not in token
            and nxt is not None
            and NEGATIVE_VALUE.match(nxt)
        ):
            out.append(f"{token}={nxt}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


@dataclass(frozen=True)
class CommandResult:
    """
    What a handler returns.

    - payload: JSON-able result (records are fine, they have to_dict)
    - csv: tabular rendering, when the command has one
    - default_format: format used when --format is not given
    - exit_code: nonzero for reports that must fail the process (certify)
    """

    payload: Any
    seed: Optional[int] = None
    csv: Optional[str] = None
    default_format: str = "json"
    exit_code: int = 0
    message: Optional[str] = None


def add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with run parameters; flags override it")
    parser.add_argument("--output", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=FORMATS, help="report format")
    parser.add_argument("--timing", action="store_true", help="include wall time in the report")
    parser.add_argument("--threads", type=int, help="worker threads (results do not depend on it)")


def load_config(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigurationError(f"Could not read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must hold a JSON object")
    return data


def merge_params(args: argparse.Namespace) -> Dict[str, Any]:
    flags = vars(args)
    params = load_config(flags.get("config"))
    params.update({k: v for k, v in flags.items() if k not in CLI_KEYS})
    return params


def run_config(params: Dict[str, Any]) -> Dict[str, Any]:
    """The part of params that identifies a run (echoed and hashed)."""
    return {k: v for k, v in sorted(params.items()) if k not in CLI_KEYS}


def _split(text: Any) -> List[str]:
    if isinstance(text, (list, tuple)):
        return [str(t) for t in text]
    return [t for t in str(text).replace(" ", "").split(",") if t]


def _parse_list(text: Any, cast: Callable[[str], Any], what: str) -> List[Any]:
    try:
        values = [cast(t) for t in _split(text)]
    except ValueError as e:
        raise ConfigurationError(f"{what} must be a comma-separated list, got '{text}'") from e
    if not values:
        raise ConfigurationError(f"{what} is empty")
    return values


def float_list(text: Any, what: str) -> List[float]:
    return _parse_list(text, float, what)


def int_list(text: Any, what: str) -> List[int]:
    return _parse_list(text, int, what)


def str_list(text: Any, what: str) -> List[str]:
    return _parse_list(text, str, what)


def require(params: Dict[str, Any], key: str, flag: str) -> Any:
    if params.get(key) is None:
        raise ConfigurationError(f"missing {flag} (or '{key}' in --config)")
    return params[key]
