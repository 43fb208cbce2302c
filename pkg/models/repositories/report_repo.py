"""
Run report repository interfaces and implementations.

Date: 2026-10-18

This module defines the ReportRepository abstraction and three concrete
implementations:
- InMemoryReportRepository (tests / GSTEIN_STORE=memory)
- FileReportRepository (one JSON file per run in GSTEIN_STORE_DIR)
- MongoReportRepository (GSTEIN_STORE=mongo)

Architectural role:
- Repository layer (persistence boundary)
- Archives RunRecords after each CLI command

Design notes:
- Records are keyed by run_id; adding a record with an existing run_id
  replaces the stored one
- list_recent orders by created_at, newest first
"""

from __future__ import annotations

import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, List, Optional

from models.records.run_record import RunRecord
from models.records.serialization import canonical_json

logger = logging.getLogger(__name__)


class ReportRepository(ABC):
    """
    Abstract repository interface for archived runs.

    Implementations:
    - InMemoryReportRepository
    - FileReportRepository
    - MongoReportRepository
    """

    @abstractmethod
    def add(self, record: RunRecord) -> None:
        """Persist a run, replacing an earlier one with the same run_id."""
        raise NotImplementedError

    @abstractmethod
    def get(self, run_id: str) -> Optional[RunRecord]:
        raise NotImplementedError

    @abstractmethod
    def list_recent(self, limit: int = 10) -> List[RunRecord]:
        raise NotImplementedError


class InMemoryReportRepository(ReportRepository):
    def __init__(self) -> None:
        self._records: Dict[str, RunRecord] = {}

    def add(self, record: RunRecord) -> None:
        self._records[record.run_id] = record

    def get(self, run_id: str) -> Optional[RunRecord]:
        return self._records.get(run_id)

    def list_recent(self, limit: int = 10) -> List[RunRecord]:
        return sorted(self._records.values(), key=lambda r: r.created_at, reverse=True)[:limit]


class FileReportRepository(ReportRepository):
    """
    Stores each run as <directory>/<run_id>.json (canonical JSON).

    The directory is created on first write.
    """

    def __init__(self, directory) -> None:
        self._dir = Path(directory)

    def _path(self, run_id: str) -> Path:
        return self._dir / f"{run_id}.json"

    def add(self, record: RunRecord) -> None:
        self._dir.mkdir(parents=True, exist_ok=True)
        self._path(record.run_id).write_text(canonical_json(record.to_dict()), encoding="utf-8")
        logger.debug("archived run %s in %s", record.run_id, self._dir)

    def get(self, run_id: str) -> Optional[RunRecord]:
        path = self._path(run_id)
        if not path.exists():
            return None
        return RunRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_recent(self, limit: int = 10) -> List[RunRecord]:
        if not self._dir.exists():
            return []
        records = [
            RunRecord.from_dict(json.loads(p.read_text(encoding="utf-8")))
            for p in self._dir.glob("*.json")
        ]
        return sorted(records, key=lambda r: r.created_at, reverse=True)[:limit]


class MongoReportRepository(ReportRepository):
    """
    MongoDB implementation of ReportRepository.

    Notes:
    - Mongo adds an internal '_id' field that must be removed when
      hydrating records.
    - created_at is stored as an ISO string, which sorts chronologically
      for UTC timestamps.
    """

    def __init__(self, runs_collection) -> None:
        """
        Inject the collection to keep this class testable.
        """
        self._col = runs_collection

    def add(self, record: RunRecord) -> None:
        self._col.replace_one({"run_id": record.run_id}, record.to_dict(), upsert=True)

    def get(self, run_id: str) -> Optional[RunRecord]:
        doc = self._col.find_one({"run_id": run_id})
        if not doc:
            return None
        doc.pop("_id", None)
        return RunRecord.from_dict(doc)

    def list_recent(self, limit: int = 10) -> List[RunRecord]:
        cursor = self._col.find({}).sort("created_at", -1).limit(limit)
        records: List[RunRecord] = []
        for doc in cursor:
            doc.pop("_id", None)
            records.append(RunRecord.from_dict(doc))
        return records
