"""Suite-wide fixtures: the acceptance-criteria reporter.

Each acceptance test records a PASS/FAIL verdict; the hook below prints one
line per criterion after the run so the result is visible even though pytest
captures in-test output.
"""

from __future__ import annotations

import pytest

_RESULTS: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def acceptance():
    def record(number: int, name: str, passed: bool) -> None:
        _RESULTS[number] = (name, passed)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        name, passed = _RESULTS[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {number} {name}: {verdict}")
