import pytest

from equisquare import oracle


@pytest.fixture(scope="session")
def census2():
    return oracle.census(2)


@pytest.fixture(scope="session")
def census3():
    return oracle.census(3)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    def _record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {label}"
        if detail:
            line += f": {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
