import sys
from pathlib import Path

import pytest

from sskg.spec_io import parse_spec

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
CORPUS_NAMES = sorted(p.stem for p in CORPUS_DIR.glob("*.json"))


def load(name):
    return parse_spec((CORPUS_DIR / f"{name}.json").read_bytes())


@pytest.fixture(scope="session")
def corpus():
    return {name: load(name) for name in CORPUS_NAMES}


@pytest.fixture
def fresh():
    """Load a corpus graph without any shared caches."""
    return load


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(i))
