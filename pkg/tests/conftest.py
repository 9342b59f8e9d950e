from __future__ import annotations

import pytest

from frlogic.oracle.kernels import warm_up

_criteria: dict[int, tuple[str, bool]] = {}


def pytest_configure(config) -> None:
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    # numba compiles on first call; keep that out of every timed test
    warm_up()


def pytest_runtest_logreport(report) -> None:
    if report.when != "call" and not report.failed:
        return
    nums = [v for k, v in report.user_properties if k == "criterion"]
    for num in nums:
        nodeid, ok = _criteria.get(num, (report.nodeid, True))
        _criteria[num] = (nodeid, ok and report.passed)


@pytest.fixture(autouse=True)
def _tag_criterion(request):
    m = request.node.get_closest_marker("criterion")
    if m is not None:
        request.node.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter) -> None:
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        nodeid, ok = _criteria[num]
        terminalreporter.write_line(f"ACCEPTANCE criterion {num}: {'PASS' if ok else 'FAIL'}  ({nodeid})")
