"""Shared pytest plumbing for the suite."""

import pytest

acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Record one PASS/FAIL line per acceptance check for the run summary."""

    def emit(name: str, ok: bool, detail: str) -> str:
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        acceptance_lines.append(line)
        return line

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
