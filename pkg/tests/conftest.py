from __future__ import annotations

import pytest


class CriterionLog:
    """Collects one pass/fail line per acceptance criterion.

    ``report`` prints the line immediately (visible with ``-s`` or on
    failure) and stores it so the terminal summary replays every line at
    the end of the run, pass or fail.
    """

    def __init__(self):
        self.lines: list[tuple[int, str]] = []

    def report(self, num: int, ok: bool, detail: str) -> None:
        line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
        self.lines.append((num, line))
        print(line)
        assert ok, line


def pytest_configure(config):
    config._criterion_log = CriterionLog()


@pytest.fixture(scope="session")
def criteria(request) -> CriterionLog:
    return request.config._criterion_log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = getattr(config, "_criterion_log", None)
    if log is not None and log.lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(log.lines):
            terminalreporter.write_line(line)
