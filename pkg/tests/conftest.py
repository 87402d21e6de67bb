import numpy as np
import pytest

from cliffordlines import SinSquaredBump, ZeroBump

TWO_PI = 2.0 * np.pi


@pytest.fixture(scope="session")
def bump():
    return SinSquaredBump()


@pytest.fixture(scope="session")
def zero_bump():
    return ZeroBump()


def grid(n, offset=0.0):
    g = offset + np.arange(n) * (TWO_PI / n)
    return np.meshgrid(g, g, indexing="ij")
