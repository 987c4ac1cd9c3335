import cmath
import math

import numpy as np
import pytest


def naive_idft(X):
    """O(N^2) unitary inverse DFT, straight from the definition."""
    N = len(X)
    return np.array(
        [sum(X[k] * cmath.exp(2j * math.pi * k * n / N) for k in range(N)) / math.sqrt(N)
         for n in range(N)]
    )


def naive_dft(x):
    N = len(x)
    return np.array(
        [sum(x[n] * cmath.exp(-2j * math.pi * k * n / N) for n in range(N)) / math.sqrt(N)
         for k in range(N)]
    )


def complex_normal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


ACCEPTANCE_RESULTS = []


@pytest.fixture
def record_acceptance():
    def record(criterion, passed, detail):
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_RESULTS.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
