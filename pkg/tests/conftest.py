import pytest

from eiscong.curves import WeierstrassCurve

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def e11a1():
    return WeierstrassCurve.from_ainvs([0, -1, 1, -10, -20], "11a1", True)


@pytest.fixture(scope="session")
def e14a1():
    return WeierstrassCurve.from_ainvs([1, 0, 1, 4, -6], "14a1", True)


@pytest.fixture(scope="session")
def e26b1():
    return WeierstrassCurve.from_ainvs([1, -1, 1, -3, 3], "26b1", True)


@pytest.fixture(scope="session")
def e38b1():
    return WeierstrassCurve.from_ainvs([1, 1, 1, 0, 1], "38b1", True)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and rep.when == "call":
        _ACCEPTANCE.append((marker.args[0], item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, outcome in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if outcome == 'passed' else 'FAIL'}  ({name})")
