from pathlib import Path

import pytest

from lpmine import EventLog

DATA = Path(__file__).parent / "data"

# (criterion, verdict, detail) rows filled by test_acceptance.py
ACCEPTANCE_ROWS: list[tuple[str, str, str]] = []


def fig1_traces() -> list[tuple[str, ...]]:
    lines = (DATA / "fig1_traces.txt").read_text().splitlines()
    return [tuple(line.split()) for line in lines if line.strip()]


@pytest.fixture(scope="session")
def fig1_log() -> EventLog:
    return EventLog(fig1_traces())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_ROWS:
        return
    terminalreporter.section("acceptance criteria")
    for crit, verdict, detail in sorted(ACCEPTANCE_ROWS, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {crit}: {verdict}  {detail}")
