"""Prints the acceptance summary after the test run."""


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import SUMMARY

    if not SUMMARY:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(SUMMARY):
        for line in SUMMARY[k]:
            terminalreporter.write_line(line)
