"""Shared fixtures: parsed corpus bundles and corpus file paths."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # checkers/generators importable

from tmkit import parse
from tmkit.corpus import corpus_path, corpus_text

TM_FILES = ("underpants.tm", "order.tm", "carservice.tm", "letter.tm", "brutus.tm")
AD_FILES = ("order_ad.json", "carservice_ad.json")


@pytest.fixture(scope="session")
def corpus_bundles():
    """name (without extension) -> parsed ModelBundle, for all .tm files."""
    return {name.removesuffix(".tm"): parse(corpus_text(name)) for name in TM_FILES}


@pytest.fixture(scope="session")
def corpus_texts():
    return {name: corpus_text(name) for name in TM_FILES + AD_FILES}


@pytest.fixture(scope="session")
def corpus_paths():
    return {name: corpus_path(name) for name in TM_FILES + AD_FILES}


@pytest.fixture()
def underpants(corpus_bundles):
    return corpus_bundles["underpants"]


@pytest.fixture()
def order(corpus_bundles):
    return corpus_bundles["order"]


@pytest.fixture()
def carservice(corpus_bundles):
    return corpus_bundles["carservice"]


@pytest.fixture()
def letter(corpus_bundles):
    return corpus_bundles["letter"]


@pytest.fixture()
def brutus(corpus_bundles):
    return corpus_bundles["brutus"]
