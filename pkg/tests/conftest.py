"""Collects acceptance-criterion outcomes and prints one PASS/FAIL line each."""

_titles: dict[int, str] = {}
_nodes: dict[str, int] = {}
_outcomes: dict[int, bool] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        number = mark.args[0]
        _titles[number] = mark.args[1] if len(mark.args) > 1 else ""
        _nodes[item.nodeid] = number


def pytest_runtest_logreport(report):
    number = _nodes.get(report.nodeid)
    if number is None:
        return
    if report.failed:
        _outcomes[number] = False
    elif report.when == "call" and report.passed:
        _outcomes.setdefault(number, True)


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_titles):
        ok = _outcomes.get(number)
        status = "PASS" if ok else ("FAIL" if ok is False else "NOT RUN")
        terminalreporter.write_line(f"{status} criterion {number}: {_titles[number]}")
