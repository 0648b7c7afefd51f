"""Shared pytest hooks: surface acceptance-criterion verdicts.

The acceptance tests record one ``[criterion N] PASS/FAIL`` line each;
printing during the run would be swallowed by output capture, so the
lines are replayed in the terminal summary instead.
"""

ACCEPTANCE_VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_VERDICTS):
            terminalreporter.write_line(line)
