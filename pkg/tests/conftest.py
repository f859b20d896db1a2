import pytest

_LINES = []


@pytest.fixture
def criterion(request):
    """``criterion(ok, detail)`` records one acceptance line, then asserts ``ok``."""
    name = request.node.name

    def record(ok, detail):
        _LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
