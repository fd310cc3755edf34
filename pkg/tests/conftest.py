import json
from pathlib import Path

import pytest

from qcmoment.problem import load_problem

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE_LINES = []


def record_acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    """Remember a PASS/FAIL line for the end-of-run acceptance summary."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    _ACCEPTANCE_LINES.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


@pytest.fixture
def load():
    def _load(name):
        return load_problem(fixture_path(name))

    return _load


@pytest.fixture
def raw():
    def _raw(name):
        return json.loads(fixture_path(name).read_text())

    return _raw
