from __future__ import annotations

from pathlib import Path

import pytest

from uket_extract.corpus import load_corpus
from uket_extract.extraction import load_records
from uket_extract.quality import AnnotationStore

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture(scope="session")
def fixture_root() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_corpus(FIXTURES / "corpus")


@pytest.fixture(scope="session")
def fixture_records():
    return load_records(FIXTURES / "records")


@pytest.fixture(scope="session")
def fixture_annotations():
    return AnnotationStore(FIXTURES / "annotations").load_all()


@pytest.fixture(scope="session")
def golden_response_1() -> str:
    return (GOLDEN / "3328920_2017.response.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_response_2() -> str:
    return (GOLDEN / "2301070_2018.response.txt").read_text(encoding="utf-8")
