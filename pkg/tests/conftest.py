import sys
import warnings

import numpy as np
import pytest

from ecmkit.lagselect import SmallSampleWarning


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


@pytest.fixture(autouse=True)
def _quiet_small_sample():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallSampleWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
