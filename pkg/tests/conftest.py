"""Collects one verdict per acceptance criterion and prints them at the end of the run."""

CRITERIA: dict = {}


def record(number: int, title: str, verdict: str, detail: str = "") -> None:
    CRITERIA[number] = (title, verdict, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, verdict, detail = CRITERIA[number]
        tr.write_line(f"[{verdict}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else ""))
