import mpmath
import pytest

mpmath.mp.dps = 50


@pytest.fixture(scope="session")
def mp():
    return mpmath.mp
