"""Shared pytest plumbing.

The acceptance tests append one line per criterion to a session-wide list;
the terminal-summary hook prints that list as its own section so the
pass/fail status of every criterion is visible in one place regardless of
how verbose the main test output is.
"""

import pytest


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance(request):
    """Append ``"criterion N: PASS/FAIL — detail"`` strings to this list."""
    return request.config._acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
