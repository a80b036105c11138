import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def assert_allclose(actual, expected, atol=1e-10, rtol=0.0):
    np.testing.assert_allclose(actual, expected, atol=atol, rtol=rtol)


# -- acceptance criteria reporting ----------------------------------------------------

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record a criterion outcome; returns ``ok`` so tests can assert on it."""

    def record(number, title, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
