import numpy as np
import pytest

from nahmsolve.geometry import E2, equilateral_config, random_config, spectral_data


@pytest.fixture(scope="session")
def e2():
    return spectral_data(E2)


@pytest.fixture(scope="session")
def equilateral():
    return spectral_data(equilateral_config())


@pytest.fixture(scope="session")
def random_spectral():
    cache = {}

    def get(n, seed=0):
        if (n, seed) not in cache:
            cache[n, seed] = spectral_data(random_config(n, seed))
        return cache[n, seed]
    return get


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE = {}


@pytest.fixture
def verdict():
    """Record one acceptance line, then fail the test if the check did not pass."""
    def record(number, ok, detail):
        line = "criterion %2d: %s  %s" % (number, "PASS" if ok else "FAIL", detail)
        ACCEPTANCE[number] = line
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
