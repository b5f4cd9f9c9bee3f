import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from padic_siegel_lab.cache import configure_cache


@pytest.fixture(autouse=True, scope="session")
def _memory_cache():
    # never touch a cache directory named in the environment
    configure_cache(None)
    yield


CRITERIA: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            CRITERIA.setdefault(value, []).append(report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker:
            item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        outcomes = CRITERIA[n]
        ok = all(o == "passed" for o in outcomes)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({len(outcomes)} checks)")
