import time

import numpy as np
import pytest
from hypothesis import settings

from germfib import Config, catalog_germ

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


@pytest.fixture
def xy_z2():
    return catalog_germ("xy_z2")


@pytest.fixture
def ex31_n4():
    return catalog_germ("ex31_n4")


@pytest.fixture
def cfg():
    return Config()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    item._t0 = time.perf_counter()
    yield


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    elapsed = time.perf_counter() - getattr(item, "_t0", time.perf_counter())
    _ACCEPTANCE[number] = ("PASS" if rep.passed else "FAIL", title, elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, elapsed = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({elapsed:.1f} s)")
