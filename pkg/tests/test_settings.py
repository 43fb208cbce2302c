"""
tests/test_settings.py

Date: 2026-10-18

Settings parsing from environment mappings.
"""

import pytest

from config.settings import Settings
from models.behavior.errors import ConfigurationError


def test_defaults_from_empty_environment():
    s = Settings.from_env({})
    assert s == Settings()
    assert s.store == "none"
    assert s.threads == 1


def test_values_are_parsed_and_normalized():
    s = Settings.from_env(
        {
            "GSTEIN_THREADS": "4",
            "GSTEIN_ENUM_CAP": "1000",
            "GSTEIN_QUAD_TOL": "1e-10",
            "GSTEIN_STORE": " File ",
            "GSTEIN_STORE_DIR": "/tmp/runs",
            "GSTEIN_LOG_LEVEL": "debug",
        }
    )
    assert (s.threads, s.enum_cap, s.quad_tol) == (4, 1000, 1e-10)
    assert s.store == "file"
    assert s.log_level == "DEBUG"


@pytest.mark.parametrize(
    "env",
    [
        {"GSTEIN_THREADS": "many"},
        {"GSTEIN_THREADS": "0"},
        {"GSTEIN_ENUM_CAP": "-5"},
        {"GSTEIN_QUAD_TOL": "0.1"},
        {"GSTEIN_STORE": "redis"},
        {"GSTEIN_LOG_LEVEL": "LOUD"},
        {"GSTEIN_STORE": "mongo"},
    ],
)
def test_invalid_values(env):
    with pytest.raises(ConfigurationError) as err:
        Settings.from_env(env)
    assert err.value.exit_code == 2


def test_mongo_store_with_connection_details():
    s = Settings.from_env({"GSTEIN_STORE": "mongo", "MONGODB_URI": "mongodb://localhost", "MONGODB_DB": "gs"})
    assert s.mongodb_db == "gs"


def test_thread_override():
    s = Settings()
    assert s.with_threads(None) is s
    assert s.with_threads(8).threads == 8
    with pytest.raises(ConfigurationError):
        s.with_threads(0)
