import mpmath
import pytest

mpmath.mp.dps = 40


@pytest.fixture
def seed():
    return 20240601


@pytest.fixture
def samples():
    return 40_000
