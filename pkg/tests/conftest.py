import pytest

from vlcsim.scenario import PRESETS, preset_scenario


@pytest.fixture(scope="session")
def preset_scenarios():
    return {p.name: preset_scenario(p) for p in PRESETS}
