import pytest

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE[number] = (title, rep.passed, getattr(item, "acceptance_detail", ""))


@pytest.fixture
def detail(request):
    """Let an acceptance test attach a one-line measurement to the summary."""
    def record(text):
        request.node.acceptance_detail = text
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, info = _ACCEPTANCE[number]
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] {number}. {title}"
        if info:
            line += f"  ({info})"
        terminalreporter.write_line(line)
