"""
tests/conftest.py

Date: 2026-10-18

Shared fixtures. Tests build Settings directly and never read .env, so no
database or environment setup is needed; the Mongo repository is
exercised against an in-process fake collection.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from config.settings import Settings
from models.domain.product_space import DiscreteFactor, DiscreteProductSpace, UStatKernel


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture
def rademacher_space_2() -> DiscreteProductSpace:
    return DiscreteProductSpace.iid(DiscreteFactor.rademacher(), 2)


@pytest.fixture
def pair_product_kernel() -> UStatKernel:
    """ψ = x₁x₂."""
    return UStatKernel(lambda a: a[0] * a[1], d=2, name="x1x2")


@pytest.fixture
def skewed_factor() -> DiscreteFactor:
    """Centered law on {−2, 1} with probabilities {1/3, 2/3}: E X² = 2, E X⁴ = 6."""
    return DiscreteFactor((-2, 1), (Fraction(1, 3), Fraction(2, 3)))


class FakeCursor:
    def __init__(self, docs):
        self._docs = list(docs)

    def sort(self, key, direction):
        self._docs.sort(key=lambda d: d[key], reverse=direction < 0)
        return self

    def limit(self, n):
        self._docs = self._docs[:n]
        return self

    def __iter__(self):
        return iter(self._docs)


class FakeCollection:
    """The slice of the pymongo Collection API the report repository uses."""

    def __init__(self):
        self.docs = {}
        self.indexes = {}

    def replace_one(self, flt, doc, upsert=False):
        key = flt["run_id"]
        if key in self.docs or upsert:
            self.docs[key] = {**doc, "_id": f"oid-{len(self.docs)}"}

    def find_one(self, flt):
        doc = self.docs.get(flt["run_id"])
        return None if doc is None else dict(doc)

    def find(self, flt=None):
        return FakeCursor(dict(d) for d in self.docs.values())

    def create_index(self, keys, unique=False, name=None):
        self.indexes[name] = (list(keys), unique)
        return name


@pytest.fixture
def fake_collection() -> FakeCollection:
    return FakeCollection()
