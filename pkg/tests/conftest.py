"""Shared pytest plumbing: a recorder for the acceptance checklist.

Acceptance tests report one line per numbered criterion; the collected lines
are printed as a dedicated section at the end of the run.
"""

import pytest

_CRITERION_LINES: list[str] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    _CRITERION_LINES.append(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'} - {detail}")


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)
