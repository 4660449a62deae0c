import pytest

from geoling.alerts import load_alert1
from geoling.fcl import Mode, compile_program
from geoling.linguistic import build_twofold_partition, build_uniform_partition

DISTANCE_LABELS = ["InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute"]
DISTANCE_APEXES = [0.0, 200.0, 400.0, 700.0, 1200.0]
BATTERY_LABELS = ["Minimum", "VeryLow", "Low", "Medium", "High", "VeryHigh", "Maximum"]
BATTERY_APEXES = [0.0, 10.0, 20.0, 50.0, 60.0, 80.0, 100.0]
TOLERANCE_LABELS = ["Minimum", "Medium", "Maximum"]
TOLERANCE_APEXES = [0.0, 60.0, 120.0]


@pytest.fixture(scope="session")
def distance_twofold():
    return build_twofold_partition(DISTANCE_LABELS, DISTANCE_APEXES)


@pytest.fixture(scope="session")
def distance_uniform():
    return build_uniform_partition(DISTANCE_LABELS, 0.0, 1200.0)


@pytest.fixture(scope="session")
def battery_twofold():
    return build_twofold_partition(BATTERY_LABELS, BATTERY_APEXES)


@pytest.fixture(scope="session")
def tolerance_twofold():
    return build_twofold_partition(TOLERANCE_LABELS, TOLERANCE_APEXES)


@pytest.fixture(scope="session")
def alert1():
    return load_alert1()


@pytest.fixture(scope="session")
def twofold_controller(alert1):
    return compile_program(alert1, Mode.TWOFOLD)


@pytest.fixture(scope="session")
def uniform_controller(alert1):
    return compile_program(alert1, Mode.UNIFORM_BASELINE)
