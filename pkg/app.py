"""
app.py

Date: 2026-10-18

Application entry point.

This is the one place the whole tool is wired together at startup:
- Load .env and build Settings (config/settings.py)
- Configure logging (library modules only create named loggers)
- Pick the ReportRepository named by GSTEIN_STORE
- Hand the command line to cli.run(), which builds controllers per command

Usage:
    python app.py certify --r 0.5,1,2,5
    python app.py dejong --family rademacher-quadratic --n 6,8,10,12
"""

from __future__ import annotations

import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from cli import run
from config.settings import Settings
from models.behavior.errors import GammaSteinError
from models.repositories.report_repo import (
    FileReportRepository,
    InMemoryReportRepository,
    ReportRepository,
)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def create_report_repository(settings: Settings) -> Optional[ReportRepository]:
    """Repository selected by settings.store, or None when archiving is off."""
    if settings.store == "memory":
        return InMemoryReportRepository()
    if settings.store == "file":
        return FileReportRepository(settings.store_dir)
    if settings.store == "mongo":
        from db.mongo import runs_collection
        from models.repositories.report_repo import MongoReportRepository

        return MongoReportRepository(runs_collection(settings))
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    try:
        settings = Settings.from_env()
    except GammaSteinError as e:
        print(f"gamma-stein: {e}", file=sys.stderr)
        return e.exit_code

    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        reports = create_report_repository(settings)
    except GammaSteinError as e:
        logging.getLogger(__name__).error("%s", e)
        return e.exit_code
    return run(argv, settings, reports)


if __name__ == "__main__":
    sys.exit(main())
