import numpy as np
import pytest

from kextremal import GevParams

PARAM_SETS = [GevParams(0.0, 1.0, 0.0), GevParams(1.0, 2.0, 0.5), GevParams(0.0, 1.0, -0.5)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=PARAM_SETS, ids=lambda p: f"xi={p.xi}")
def params(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for name in sorted(RESULTS, key=lambda s: (int(s.split()[1].rstrip("abcd")), s)):
            terminalreporter.write_line(RESULTS[name])
