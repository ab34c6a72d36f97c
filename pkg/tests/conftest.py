import pathlib

import pytest

from tiltrotor.sizing import load_params

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"
AIRCRAFT_TOML = CONFIG_DIR / "aircraft.toml"


@pytest.fixture(scope="session")
def params():
    """Reference aircraft, loaded once per test session."""
    return load_params(AIRCRAFT_TOML)
