import os

import pytest

RESULTS: list[str] = []


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SEQACCEL_LONG"):
        return
    skip = pytest.mark.skip(reason="long run; set SEQACCEL_LONG=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def report():
    """Record a one-line verdict printed in the terminal summary."""

    def record(line: str) -> None:
        RESULTS.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
