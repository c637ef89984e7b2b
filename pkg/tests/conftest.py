import pytest

from wrlat import ClassTuple

HEX = ClassTuple(1, 1, 2, 3)
SQUARE = ClassTuple(0, 1, 1, 1)
RECT2 = ClassTuple(1, 2, 3, 2)

_verdicts: list[tuple[str, bool, str]] = []


@pytest.fixture
def verdict(request):
    """Record one pass/fail line for an acceptance criterion; printed in the terminal summary."""
    name = request.node.name

    def record(ok: bool, detail: str = ""):
        _verdicts.append((name, bool(ok), detail))
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _verdicts:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
