import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))   # make oracles importable

from stablefront import Rig, preset_field


@pytest.fixture(scope="session")
def small_rig():
    """Cheap rig for unit tests; acceptance tests pin their own rigs."""
    return Rig(N=16, S=2, M=2)


@pytest.fixture(scope="session")
def tiny_rig():
    return Rig(N=8, S=2, M=2)


@pytest.fixture(scope="session")
def constant2():
    return preset_field("constant", v=2.0)


@pytest.fixture(scope="session")
def layered21():
    return preset_field("layered", A=2.0, B=1.0)


@pytest.fixture(scope="session")
def channel_field():
    return preset_field("channel", base=1.0, boost=4.0, width=0.2)


@pytest.fixture(scope="session")
def bumps_field():
    return preset_field("bumps", base=2.0, amp=1.0, sigma=0.15)
