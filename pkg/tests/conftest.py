import sys
import warnings

import numpy as np
import pytest

from fuzzyqp import aspiration_interval, build_system, example_instance


@pytest.fixture(scope="session")
def example():
    return example_instance()


@pytest.fixture(scope="session")
def example_system(example):
    return build_system(example, [aspiration_interval(example, q) for q in range(example.k)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _quiet_numpy():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
