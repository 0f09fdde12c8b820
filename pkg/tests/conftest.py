"""Acceptance summary: one PASS/FAIL line per numbered criterion at the end of the run."""

from collections import defaultdict

import pytest

_results: dict = defaultdict(list)
_titles: dict = {}
_notes: dict = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _titles[number] = title
            item.user_properties.append(("criterion", number))


@pytest.fixture
def record(request):
    """Attach a measured value to the criterion line of the running test."""

    def _record(text):
        request.node.user_properties.append(("note", text))

    return _record


def pytest_runtest_logreport(report):
    props = dict((k, v) for k, v in report.user_properties if k == "criterion")
    if "criterion" not in props:
        return
    number = props["criterion"]
    if report.when == "call" or report.outcome != "passed":
        _results[number].append(report.outcome == "passed")
    if report.when == "call":
        _notes[number].extend(v for k, v in report.user_properties if k == "note")


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_titles):
        outcomes = _results.get(number)
        status = "PASS" if outcomes and all(outcomes) else ("FAIL" if outcomes else "NOT RUN")
        line = f"criterion {number}: {status}  {_titles[number]}"
        notes = _notes.get(number)
        if notes:
            line += "  [" + "; ".join(notes) + "]"
        terminalreporter.write_line(line)
