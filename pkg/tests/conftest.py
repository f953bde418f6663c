import pytest

from casimir.constants import ev_to_rad_per_s
from casimir.dielectric import Drude, Plasma
from casimir.numerics import QuadratureSettings

# gold parameters used throughout: omega_p = 9.03 eV, gamma = 0.0345 eV
GOLD_OMEGA_P = ev_to_rad_per_s(9.03)
GOLD_GAMMA = ev_to_rad_per_s(0.0345)


@pytest.fixture(scope="session")
def gold():
    return Drude(GOLD_OMEGA_P, GOLD_GAMMA)


@pytest.fixture(scope="session")
def gold_plasma():
    return Plasma(GOLD_OMEGA_P)


@pytest.fixture(scope="session")
def tight():
    return QuadratureSettings(rel_tol=1e-7)


@pytest.fixture(scope="session")
def very_tight():
    return QuadratureSettings(rel_tol=1e-9)
