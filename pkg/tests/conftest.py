from __future__ import annotations

import functools
from pathlib import Path

import pytest

from blocktool.perm import Group

CORPUS_DIR = Path(__file__).resolve().parents[1] / "src" / "blocktool" / "corpus"
CORPUS_NAMES = ["C6", "S3", "S4", "A4", "A5", "D8", "D10", "Q8", "SL23",
                "C7C3", "C5C4"]


@functools.lru_cache(maxsize=None)
def corpus_group(name: str) -> Group:
    return Group.from_file(CORPUS_DIR / f"{name}.json")


@pytest.fixture(scope="session")
def corpus() -> list[Group]:
    return [corpus_group(name) for name in CORPUS_NAMES]
