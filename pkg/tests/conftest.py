"""Shared pytest wiring: print one verdict line per acceptance criterion.

test_acceptance.py appends its lines to ACCEPTANCE_LINES as it runs; the
terminal-summary hook prints them after the test report so the verdicts are
visible whether or not output capture is on.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
