import numpy as np
import pytest

from peg.curves import circle, ellipse


@pytest.fixture(scope="session")
def unit_circle():
    return circle(1.0, 4096)


@pytest.fixture(scope="session")
def ellipse21():
    return ellipse(2.0, 1.0, 4096)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
