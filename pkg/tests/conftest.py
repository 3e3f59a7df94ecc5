import pytest

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the verdict is its final assertion."""
    number, title = request.node.get_closest_marker("criterion").args

    def record(ok: bool, detail: str = "") -> None:
        ACCEPTANCE[number] = (f"{title}{': ' + detail if detail else ''}", bool(ok))
        assert ok, detail or title

    ACCEPTANCE[number] = (title, False)
    return record


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}")
