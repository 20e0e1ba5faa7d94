import math

import pytest


def direct_potential(thetas, charges):
    """Energy by explicit double loop over ordered pairs."""
    total = 0.0
    for i, (ti, qi) in enumerate(zip(thetas, charges)):
        for j, (tj, qj) in enumerate(zip(thetas, charges)):
            if i != j:
                total += qi * qj / math.sin((tj - ti) / 2) ** 2
    return total


def direct_first_residual(thetas, charges, i):
    return sum(
        charges[j] * math.cos((thetas[j] - thetas[i]) / 2) / math.sin((thetas[j] - thetas[i]) / 2) ** 3
        for j in range(len(thetas))
        if j != i
    )


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
