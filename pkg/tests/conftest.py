import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from impulsegraph.image import Image

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def flat(width, height, value=128):
    return Image.filled(width, height, value)


@pytest.fixture
def single_outlier():
    """16x16 gray-128 with (8, 8) set to 10."""
    arr = np.full((16, 16), 128, dtype=np.uint8)
    arr[8, 8] = 10
    return Image.from_array(arr)


MEASUREMENTS: list[str] = []


@pytest.fixture
def report():
    """Collect a measured value for the end-of-run summary."""
    return MEASUREMENTS.append


def pytest_terminal_summary(terminalreporter):
    if MEASUREMENTS:
        terminalreporter.section("acceptance measurements")
        for line in MEASUREMENTS:
            terminalreporter.write_line(line)
