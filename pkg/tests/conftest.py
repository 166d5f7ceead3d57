import functools
from pathlib import Path

import pytest

from lrgroups.amalgam import build_amalgam
from lrgroups.lranalysis import reproduce_table1

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@functools.lru_cache(maxsize=None)
def amalgam(name):
    return build_amalgam(name)


@functools.lru_cache(maxsize=None)
def report(name):
    return reproduce_table1(name)


@pytest.fixture(scope="session")
def get_amalgam():
    return amalgam


@pytest.fixture(scope="session")
def get_report():
    return report


_CRITERIA: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    m = getattr(report, "criterion", None)
    if m is None:
        return
    if report.when == "call" or report.failed:
        _CRITERIA.setdefault(m, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok = all(_CRITERIA[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({sum(_CRITERIA[n])}/{len(_CRITERIA[n])} tests)")
