import pytest

_CRITERIA: dict[int, str] = {}


def _line(number: int, title: str, ok: bool, detail: str = "") -> str:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
    return f"{line}  ({detail})" if detail else line


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def criterion(request):
    """``criterion(ok, detail)`` records the pass/fail line of the marked criterion."""
    number, title = request.node.get_closest_marker("criterion").args

    def report(ok: bool, detail: str = "") -> bool:
        _CRITERIA[number] = _line(number, title, ok, detail)
        print(_CRITERIA[number])
        return ok

    return report


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    if rep.failed and (number not in _CRITERIA or " PASS " in _CRITERIA[number]):
        _CRITERIA[number] = _line(number, title, False, "raised before completing")


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
