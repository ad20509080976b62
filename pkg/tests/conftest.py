import pytest

_ACCEPTANCE: list[tuple[int, str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, text = marker.args
        _ACCEPTANCE.append((number, text, rep.outcome.upper(), rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, result, duration in sorted(_ACCEPTANCE):
        mark = "PASS" if result == "PASSED" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number:2d}. {text} ({duration:.2f}s)")
