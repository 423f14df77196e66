import pytest

from varietydvfs.power import PowerCurve, ServerModel


@pytest.fixture
def unit_server():
    """Default cubic curve (100 W idle, 200 W at 2.8 GHz), u_full = 1."""
    return ServerModel((1.6, 2.8), PowerCurve(), 1.0)


@pytest.fixture
def default_server():
    return ServerModel()


# One verdict line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES = []


def record_verdict(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} | {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
