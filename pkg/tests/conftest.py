from __future__ import annotations

import sys
from pathlib import Path

import pytest

from samsa import parse_scene_json

# make the sibling oracle module importable from every test file
sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance-criterion verdict lines after the run."""
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.line(line)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture(name: str):
    return parse_scene_json((FIXTURES / name).read_text(encoding="utf-8"))


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture
def got_call():
    return load_fixture("got_call.json")


@pytest.fixture
def read_book():
    return load_fixture("read_book.json")


@pytest.fixture
def read_book_escene():
    return load_fixture("read_book_escene.json")


@pytest.fixture
def traveling():
    return load_fixture("traveling.json")


@pytest.fixture
def ran_park():
    return load_fixture("ran_park.json")


@pytest.fixture
def president():
    return load_fixture("president.json")


@pytest.fixture
def coordination():
    return load_fixture("coordination.json")
