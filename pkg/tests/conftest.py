"""Shared reporting: collects acceptance verdicts and prints them last."""

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        verdict, text = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {text}")
