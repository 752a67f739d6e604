import numpy as np
import pytest

from cycleprobe import synthetic


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def bundled():
    # the shipped files are generated from the default seed whatever CYCLEPROBE_SEED says
    return synthetic.bundled_panels(synthetic.DEFAULT_SEED)


@pytest.fixture(scope="session")
def data_dir():
    return synthetic.bundled_data_dir()


_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, label = marker.args
    if rep.skipped:
        _acceptance[number] = ("SKIP", label)
    elif rep.failed:
        _acceptance[number] = ("FAIL", label)
    elif rep.when == "call":
        _acceptance.setdefault(number, ("PASS", label))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        status, label = _acceptance[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {label}")
