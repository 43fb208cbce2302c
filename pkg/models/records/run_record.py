"""
Run record.

Date: 2026-10-18

RunRecord is the archived outcome of one CLI invocation: what was asked
(command and config echo), with which seed and library versions, and what
came out (report payload and exit code).

Architectural role:
- Record model (persistence-friendly, immutable)
- Boundary object between the command layer and the report repositories

run_id depends only on the command, the config hash and the seed, so a
repeated run with identical inputs overwrites its earlier record instead
of piling up duplicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from models.records.serialization import config_hash, library_versions


@dataclass(frozen=True)
class RunRecord:
    """
    Immutable record of one command run.

    Structure:
    - command: subcommand name (solve, certify, hoeffding, dejong, chaos, distance)
    - config: the effective parameters after merging file and flags
    - config_hash: SHA-256 of the canonical JSON of config
    - seed: Monte Carlo seed (None for deterministic commands)
    - versions: package, numpy, scipy and python versions
    - report: the emitted report payload
    - exit_code: process exit code
    - wall_time: seconds spent in the command
    - created_at: UTC timestamp
    """

    command: str
    config: Dict[str, Any]
    config_hash: str
    seed: Optional[int]
    versions: Dict[str, str]
    report: Dict[str, Any]
    exit_code: int = 0
    wall_time: float = 0.0
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    @property
    def run_id(self) -> str:
        return f"{self.command}-{self.config_hash[:16]}-{self.seed if self.seed is not None else 'na'}"

    @classmethod
    def create(
        cls,
        command: str,
        config: Dict[str, Any],
        seed: Optional[int],
        report: Dict[str, Any],
        exit_code: int = 0,
        wall_time: float = 0.0,
    ) -> "RunRecord":
        return cls(
            command=command,
            config=dict(config),
            config_hash=config_hash(config),
            seed=seed,
            versions=library_versions(),
            report=report,
            exit_code=exit_code,
            wall_time=wall_time,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "versions": dict(self.versions),
            "report": self.report,
            "exit_code": self.exit_code,
            "wall_time": self.wall_time,
            "created_at": self.created_at.isoformat(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        """
        Raises:
        - KeyError if required fields are missing
        - ValueError if the timestamp does not parse
        """
        return cls(
            command=data["command"],
            config=dict(data.get("config", {})),
            config_hash=data["config_hash"],
            seed=data.get("seed"),
            versions=dict(data.get("versions", {})),
            report=data.get("report", {}),
            exit_code=int(data.get("exit_code", 0)),
            wall_time=float(data.get("wall_time", 0.0)),
            created_at=datetime.fromisoformat(data["created_at"]),
        )
