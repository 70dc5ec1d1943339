import numpy as np
import pytest

from duosc.cli import preset_config
from duosc.config import to_internal, validate_config
from duosc.modes import solve_determinant


def internal(name):
    return to_internal(validate_config(preset_config(name)))


@pytest.fixture(scope="session")
def ic_fig2():
    return internal("fig2")


@pytest.fixture(scope="session")
def ic_fig3():
    return internal("fig3")


@pytest.fixture(scope="session")
def ic_fig4():
    return internal("fig4")


@pytest.fixture(scope="session")
def modes_fig3(ic_fig3):
    return solve_determinant(ic_fig3)


@pytest.fixture(scope="session")
def modes_fig2(ic_fig2):
    return solve_determinant(ic_fig2)
