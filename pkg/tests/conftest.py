"""Shared pytest plumbing.

The acceptance tests report one line per criterion.  Those lines are
collected here and echoed in the terminal summary so they stay visible
even when pytest captures stdout.
"""

import pytest


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture
def announce(request):
    """Record a criterion verdict and assert it in one step."""

    def _announce(number, ok, detail):
        verdict = "PASS" if ok else "FAIL"
        line = f"criterion {number}: {verdict} - {detail}"
        request.config._criterion_lines.append(line)
        assert ok, line

    return _announce


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)
