import json
from pathlib import Path

import pytest

from neighborhood.capture import scenario

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden_corpus():
    with open(DATA_DIR / "golden_frames.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def high_load():
    return scenario.generate_scenario(scenario.ScenarioSpec.high_load())


@pytest.fixture(scope="session")
def low_load():
    return scenario.generate_scenario(scenario.ScenarioSpec.low_load())


@pytest.fixture(scope="session")
def ble_pair():
    return scenario.generate_scenario(scenario.ScenarioSpec.ble_pair())


@pytest.fixture(scope="session")
def zigbee_mesh():
    return scenario.generate_scenario(scenario.ScenarioSpec.zigbee_mesh())
