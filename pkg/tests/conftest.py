import pytest

_outcomes: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            n, title = m.args
            _outcomes.setdefault(n, {"title": title, "passed": 0, "failed": 0, "skipped": 0})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if not m:
        return
    rec = _outcomes[m.args[0]]
    if rep.when == "call":
        rec["passed" if rep.passed else "failed" if rep.failed else "skipped"] += 1
    elif rep.failed or rep.skipped:
        rec["failed" if rep.failed else "skipped"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        rec = _outcomes[n]
        ran = rec["passed"] + rec["failed"]
        if rec["failed"]:
            status = "FAIL"
        elif ran == 0:
            status = "NOT RUN"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {n}: {status}  {rec['title']} ({rec['passed']}/{ran} tests)")
