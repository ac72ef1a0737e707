"""Bundled example models: five DSL files and two activity-diagram documents."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

CORPUS_FILES = (
    "underpants.tm",
    "order.tm",
    "carservice.tm",
    "letter.tm",
    "brutus.tm",
    "order_ad.json",
    "carservice_ad.json",
)


def corpus_path(name: str) -> Path:
    """Return the filesystem path of a bundled corpus file."""
    if name not in CORPUS_FILES:
        raise KeyError(f"unknown corpus file {name!r}")
    return Path(str(resources.files(__package__).joinpath(name)))


def corpus_text(name: str) -> str:
    """Return the contents of a bundled corpus file."""
    return corpus_path(name).read_text(encoding="utf-8")
