import numpy as np
import pytest

from dsmlin.linops import SymmetricOperator

_criteria = {}
_details = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[number] = (text, rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria):
        text, outcome = _criteria[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {text}")
        for line in _details.get(number, ()):
            terminalreporter.write_line(f"    {line}")


@pytest.fixture
def detail(request):
    """Record a measured value to print under the criterion's summary line."""
    marker = request.node.get_closest_marker("criterion")
    lines = _details.setdefault(marker.args[0] if marker else None, [])

    def log(line):
        lines.append(line)
        print(line)

    return log


@pytest.fixture
def hilbert2():
    return SymmetricOperator([[1.0, 0.5], [0.5, 1.0 / 3.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
