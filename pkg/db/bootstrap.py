"""
db/bootstrap.py

Date: 2026-10-18

Index setup for the MongoDB run archive.

WARNING:
This script creates indexes on the runs collection. Run it manually once
per database (python -m db.bootstrap); the CLI never calls it.
"""

from __future__ import annotations

import logging

from dotenv import load_dotenv

from config.settings import Settings
from db.mongo import runs_collection

logger = logging.getLogger(__name__)


def ensure_indexes(runs) -> None:
    """
    Ensure the indexes behind MongoReportRepository's queries exist.

    Idempotent. One index per query pattern:
    - get() and replace-by-run_id look up run_id
    - list_recent() sorts on created_at
    """
    runs.create_index([("run_id", 1)], unique=True, name="runs_run_id_unique")
    runs.create_index([("created_at", -1)], name="runs_created_at")
    runs.create_index([("command", 1), ("created_at", -1)], name="runs_command_history")


if __name__ == "__main__":
    load_dotenv()
    logging.basicConfig(level=logging.INFO)
    logger.info("creating run archive indexes")
    ensure_indexes(runs_collection(Settings.from_env()))
    logger.info("bootstrap complete")
