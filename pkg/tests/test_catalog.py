import hashlib
import json

import pytest

from uwbag.antenna import Orientation
from uwbag.catalog import (
    CPOL_CATALOG,
    GAMMA_V_CATALOG,
    OBSERVATION_WINDOW_NS,
    Rx,
    SV_CATALOG,
    Scenario,
    ScenarioKey,
    catalog_as_dict,
    catalog_file_text,
    catalog_lookup,
    cpol_lookup,
    params_from_row,
)

# pins the shipped data file; regenerate with `uwbag catalog` if the tables change
CATALOG_SHA256 = "46cf2b95c2cc094532017911a8e4fe3ad5f304175b88df7d17620928a583b6bb"


def test_lookup_examples():
    p = catalog_lookup(ScenarioKey(Scenario.HOVER_OPEN, Rx.RX1, Orientation.VV, 15.0))
    assert (p.n_c_mean, p.chi, p.eta, p.varsigma, p.gamma) == (3.33, 0.033, 0.23, 0.1, 8.7)
    p = catalog_lookup(ScenarioKey(Scenario.HOVER_FOLIAGE, Rx.RX2, Orientation.VH, 30.0))
    assert (p.n_c_mean, p.chi, p.eta, p.varsigma, p.gamma) == (1.33, 0.013, 0.2, 0.34, 0.74)
    p = catalog_lookup(ScenarioKey(Scenario.MOVING_OPEN, Rx.RX1, Orientation.VV, 30.0))
    assert (p.n_c_mean, p.chi, p.eta, p.varsigma, p.gamma) == (1.66, 0.017, 0.143, 0.082, 1.87)


def test_catalog_is_complete():
    assert len(SV_CATALOG) == 24  # 3 scenarios x 2 rx x 2 orientations x 2 distances
    assert len(GAMMA_V_CATALOG) == 6
    assert len(CPOL_CATALOG) == 24  # hovering + moving, 2 rx, 2 x, 3 h


def test_window_consistency_every_row():
    for key, p in SV_CATALOG.items():
        assert abs(p.chi - p.n_c_mean / OBSERVATION_WINDOW_NS) <= 0.001, key.describe()


def test_invalid_keys_rejected():
    with pytest.raises(ValueError):
        ScenarioKey(Scenario.HOVER_OPEN, Rx.RX1, Orientation.VV, 20.0)


def test_cpol_examples():
    assert cpol_lookup(Scenario.HOVER_OPEN, Rx.RX1, 15.0, 10.0) == 12.9
    assert cpol_lookup(Scenario.MOVING_OPEN, Rx.RX1, 15.0, 20.0) == 0.4
    assert cpol_lookup(Scenario.MOVING_OPEN, Rx.RX1, 30.0, 10.0) == 5.4


def test_cpol_missing_entries():
    with pytest.raises(ValueError):
        cpol_lookup(Scenario.HOVER_FOLIAGE, Rx.RX1, 15.0, 10.0)
    with pytest.raises(ValueError):
        cpol_lookup(Scenario.HOVER_OPEN, Rx.RX1, 15.0, 50.0)


def test_data_file_matches_builtin():
    assert json.loads(catalog_file_text()) == catalog_as_dict()


def test_data_file_checksum():
    digest = hashlib.sha256(catalog_file_text().encode()).hexdigest()
    assert digest == CATALOG_SHA256


def test_data_file_rows_parse_back():
    data = json.loads(catalog_file_text())
    seen = {}
    for row in data["sv"]:
        key, params = params_from_row(row)
        seen[key] = params
    assert seen == SV_CATALOG


def test_scenario_key_describe_parse_roundtrip():
    key = ScenarioKey(Scenario.MOVING_OPEN, Rx.RX2, Orientation.VH, 30.0)
    assert ScenarioKey.parse(key.describe()) == key
