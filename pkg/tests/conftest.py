import os

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])

LONG_RUNS = os.environ.get("SUPERRADIANCE_LONG", "1") != "0"


def dyadic_green_oracle(r, k0=2 * np.pi):
    """Textbook closed form of the free-space dyadic Green's function."""
    r = np.asarray(r, dtype=float)
    dist = np.linalg.norm(r)
    rr = np.outer(r, r) / dist**2
    kr = k0 * dist
    pref = np.exp(1j * kr) / (4 * np.pi * k0**2 * dist**3)
    return pref * ((kr**2 + 1j * kr - 1) * np.eye(3) + (3 - 3j * kr - kr**2) * rr)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
