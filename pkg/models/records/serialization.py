"""
Report serialization helpers.

Date: 2026-10-18

Pure functions turning records into canonical JSON and CSV text.

Architectural role:
- Output boundary of the CLI and input format of the file repository
- Keeps records free of formatting concerns

Design notes:
- Canonical JSON: sorted keys, two-space indent, floats written by repr
  (shortest round-tripping form), non-finite floats as the strings "nan",
  "inf", "-inf". Identical payloads therefore give identical bytes.
- numpy scalars and arrays are converted to Python numbers and lists.
- CSV uses ',' separators, '.' decimals, a fixed header row and '\\n' line
  ends; None becomes an empty field.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import platform
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np
import scipy

PACKAGE_VERSION = "1.0.0"
SCHEMA_VERSION = "1"


# -------------------------
# JSON
# -------------------------

def to_jsonable(value: Any) -> Any:
    """Recursively convert records, numpy values and tuples into JSON types."""
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def canonical_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def config_hash(config: Dict[str, Any]) -> str:
    """SHA-256 of the compact canonical JSON of a config mapping."""
    text = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def library_versions() -> Dict[str, str]:
    return {
        "gamma_stein": PACKAGE_VERSION,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def report_envelope(
    command: str,
    result: Any,
    config: Dict[str, Any],
    seed: Optional[int] = None,
    wall_time: Optional[float] = None,
) -> Dict[str, Any]:
    """
    Wrap a command result with schema version, config echo, seed and
    versions. wall_time is included only when given (--timing).
    """
    out: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": to_jsonable(config),
        "config_hash": config_hash(config),
        "seed": seed,
        "versions": library_versions(),
        "result": to_jsonable(result),
    }
    if wall_time is not None:
        out["wall_time"] = wall_time
    return out


# -------------------------
# CSV
# -------------------------

def _csv_field(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def rows_to_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} fields, header has {len(columns)}")
        writer.writerow([_csv_field(v) for v in row])
    return buffer.getvalue()


def records_to_csv(records: Sequence[Any]) -> str:
    """CSV for records exposing CSV_COLUMNS and csv_values()."""
    if not records:
        raise ValueError("no records to write")
    return rows_to_csv(records[0].CSV_COLUMNS, (r.csv_values() for r in records))
