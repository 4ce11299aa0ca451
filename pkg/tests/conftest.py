import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion with a time limit")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    number, title, limit = marker
    elapsed = dict(report.user_properties).get("elapsed", 0.0)
    _CRITERIA[number] = (title, report.passed, elapsed, limit)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, elapsed, limit = _CRITERIA[number]
        bound = f"limit {limit:g} s" if limit else "no time limit"
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {number}: {title} ({elapsed:.2f} s, {bound})")
