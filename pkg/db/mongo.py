"""
db/mongo.py

Date: 2026-10-18

MongoDB connection for archived run records.

The client is created lazily, on the first call to runs_collection(), so
the CLI never touches the network unless GSTEIN_STORE=mongo. Connection
parameters come from Settings, not from os.environ.
"""

from __future__ import annotations

import logging
from typing import Optional

import certifi
from pymongo import MongoClient
from pymongo.errors import PyMongoError

from config.settings import Settings
from models.behavior.errors import ConfigurationError

logger = logging.getLogger(__name__)

RUNS_COLLECTION = "runs"

_client: Optional[MongoClient] = None


def _create_client(uri: str) -> MongoClient:
    """
    Create a MongoClient configured for TLS.

    Notes:
    - TLS is required; certifi supplies the CA bundle so verification works
      the same on every host.
    - An initial ping makes connection failures surface here instead of on
      the first insert.
    """
    try:
        client = MongoClient(
            uri,
            tls=True,
            tlsCAFile=certifi.where(),
            tlsAllowInvalidCertificates=False,
            serverSelectionTimeoutMS=15000,
            connectTimeoutMS=15000,
            socketTimeoutMS=15000,
            appName="gamma-stein",
        )
        client.admin.command("ping")
        return client
    except PyMongoError as e:
        raise ConfigurationError(
            f"MongoDB connection failed. Check MONGODB_URI/MONGODB_DB, network access and TLS settings. Details: {e}"
        ) from e


def runs_collection(settings: Settings):
    """The collection holding RunRecords, connecting on first use."""
    global _client
    if not (settings.mongodb_uri and settings.mongodb_db):
        raise ConfigurationError("GSTEIN_STORE=mongo needs MONGODB_URI and MONGODB_DB. Set them in your .env")
    if _client is None:
        logger.debug("connecting to MongoDB database %s", settings.mongodb_db)
        _client = _create_client(settings.mongodb_uri)
    return _client[settings.mongodb_db][RUNS_COLLECTION]
