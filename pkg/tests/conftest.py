import pytest

from uwbag.antenna import Orientation
from uwbag.catalog import Rx, Scenario, ScenarioKey, catalog_lookup


@pytest.fixture(scope="session")
def hover_rx1_vv_15():
    """Open-field hovering row at RX1, co-polarized, x = 15 m."""
    return catalog_lookup(ScenarioKey(Scenario.HOVER_OPEN, Rx.RX1, Orientation.VV, 15.0))


@pytest.fixture(scope="session")
def foliage_rx1_vv_15():
    return catalog_lookup(ScenarioKey(Scenario.HOVER_FOLIAGE, Rx.RX1, Orientation.VV, 15.0))
