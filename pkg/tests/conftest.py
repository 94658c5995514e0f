"""Per-criterion pass/fail lines for the acceptance suite."""

import pytest

_OUTCOMES: dict[int, list] = {}
_DETAILS: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion checked by this test")


@pytest.fixture
def report(request):
    """Attach a detail line to the summary of the current criterion."""
    marker = request.node.get_closest_marker("criterion")
    return lambda text: _DETAILS.setdefault(marker.args[0], []).append(text)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        n, title = marker.args
        _OUTCOMES.setdefault(n, [title, True])
        _OUTCOMES[n][1] &= rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        title, ok = _OUTCOMES[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
        for line in _DETAILS.get(n, []):
            terminalreporter.write_line(f"    {line}")
