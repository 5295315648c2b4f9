"""Shared fixtures and the acceptance summary printed at the end of a run."""

import re

import pytest

from nicepairs.lie_core import gl4_pair

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def pair():
    return gl4_pair()


def _number(line):
    m = re.search(r"criterion (\d+)", line)
    return int(m.group(1)) if m else 0


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_number):
            terminalreporter.write_line(line)
