"""
config/settings.py

Date: 2026-10-18

Runtime settings read from the environment.

app.py calls load_dotenv() before Settings.from_env(), so values may come
from a local .env file or the real environment. Library code never reads
os.environ itself; it receives a Settings instance (or the few values it
needs) from the controllers.

Recognized variables:
- GSTEIN_THREADS     worker pool size (default 1)
- GSTEIN_ENUM_CAP    product-space enumeration cap (default 2_000_000)
- GSTEIN_QUAD_TOL    absolute quadrature tolerance (default 1e-12)
- GSTEIN_STORE       none | memory | file | mongo (default none)
- GSTEIN_STORE_DIR   directory for the file store (default "runs")
- GSTEIN_LOG_LEVEL   logging level name (default WARNING)
- MONGODB_URI / MONGODB_DB   required only for GSTEIN_STORE=mongo
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from models.behavior.errors import ConfigurationError

STORE_KINDS = ("none", "memory", "file", "mongo")


@dataclass(frozen=True)
class Settings:
    """
    Immutable runtime configuration.

    Invariants:
    - threads >= 1
    - enum_cap >= 1
    - 0 < quad_tol < 1e-6
    - store in STORE_KINDS
    """

    threads: int = 1
    enum_cap: int = 2_000_000
    quad_tol: float = 1e-12
    store: str = "none"
    store_dir: str = "runs"
    log_level: str = "WARNING"
    mongodb_uri: Optional[str] = None
    mongodb_db: Optional[str] = None

    def __post_init__(self):
        if self.threads < 1:
            raise ConfigurationError(f"GSTEIN_THREADS must be >= 1, got {self.threads}")
        if self.enum_cap < 1:
            raise ConfigurationError(f"GSTEIN_ENUM_CAP must be >= 1, got {self.enum_cap}")
        if not 0.0 < self.quad_tol < 1e-6:
            raise ConfigurationError(f"GSTEIN_QUAD_TOL must lie in (0, 1e-6), got {self.quad_tol}")
        if self.store not in STORE_KINDS:
            raise ConfigurationError(
                f"GSTEIN_STORE must be one of {', '.join(STORE_KINDS)}, got '{self.store}'"
            )
        if self.store == "mongo" and not (self.mongodb_uri and self.mongodb_db):
            raise ConfigurationError("GSTEIN_STORE=mongo needs MONGODB_URI and MONGODB_DB. Set them in your .env")
        if not isinstance(logging.getLevelName(self.log_level.upper()), int):
            raise ConfigurationError(f"Unknown GSTEIN_LOG_LEVEL '{self.log_level}'")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """
        Build settings from environment variables.

        Args:
            environ: mapping to read instead of os.environ (tests).

        Raises:
            ConfigurationError on unparsable or out-of-range values.
        """
        env = os.environ if environ is None else environ
        return cls(
            threads=_int(env, "GSTEIN_THREADS", 1),
            enum_cap=_int(env, "GSTEIN_ENUM_CAP", 2_000_000),
            quad_tol=_float(env, "GSTEIN_QUAD_TOL", 1e-12),
            store=env.get("GSTEIN_STORE", "none").strip().lower(),
            store_dir=env.get("GSTEIN_STORE_DIR", "runs"),
            log_level=env.get("GSTEIN_LOG_LEVEL", "WARNING").strip().upper(),
            mongodb_uri=env.get("MONGODB_URI") or None,
            mongodb_db=env.get("MONGODB_DB") or None,
        )

    def with_threads(self, threads: Optional[int]) -> "Settings":
        """Return a copy with the worker count overridden (CLI --threads)."""
        if threads is None:
            return self
        return replace(self, threads=threads)


def _int(env: Mapping[str, str], key: str, default: int) -> int:
    raw = env.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{key} must be an integer, got '{raw}'") from e


def _float(env: Mapping[str, str], key: str, default: float) -> float:
    raw = env.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError as e:
        raise ConfigurationError(f"{key} must be a number, got '{raw}'") from e
