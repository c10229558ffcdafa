import math
import warnings

import numpy as np
import pytest

warnings.filterwarnings("ignore", message=".*TBB.*")

from rispl.geometry import SphericalPlacement  # noqa: E402
from rispl.pathloss import LinkGeometry  # noqa: E402
from rispl.presets import default_antenna, ris_preset  # noqa: E402
from rispl.radiation import AntennaSpec, CosinePattern  # noqa: E402
from rispl.ris import PhaseProfile, RisConfig  # noqa: E402


@pytest.fixture(scope="session")
def large1():
    return ris_preset("large-ris1")


@pytest.fixture(scope="session")
def large2():
    return ris_preset("large-ris2")


@pytest.fixture(scope="session")
def small():
    return ris_preset("small-ris")


@pytest.fixture(scope="session")
def horn_x():
    return default_antenna("large-ris1")


@pytest.fixture(scope="session")
def horn_c():
    return default_antenna("small-ris")


def make_link(d1, d2, ant, theta_t=math.pi / 4, phi_t=math.pi, theta_r=math.pi / 4, phi_r=0.0, rx_ant=None):
    return LinkGeometry(SphericalPlacement(d1, theta_t, phi_t), SphericalPlacement(d2, theta_r, phi_r),
                        ant, rx_ant or ant)


def random_scenario(rng, max_size=16):
    rows = 2 * int(rng.integers(1, max_size // 2 + 1))
    cols = 2 * int(rng.integers(1, max_size // 2 + 1))
    lam = float(rng.uniform(0.02, 0.1))
    pitch = float(rng.uniform(lam / 10, lam / 2))
    cfg = RisConfig(rows, cols, pitch, pitch, amplitude=float(rng.uniform(0.2, 1)), wavelength=lam,
                    cell_pattern=CosinePattern(float(rng.uniform(0, 5))))
    prof = PhaseProfile(rng.uniform(0, 2 * math.pi, cfg.shape))
    tx_ant = AntennaSpec.from_pattern(float(rng.uniform(0, 60)))
    rx_ant = AntennaSpec.from_pattern(float(rng.uniform(0, 60)))
    link = LinkGeometry(
        SphericalPlacement(float(rng.uniform(0.2, 50)), float(rng.uniform(0, 1.4)), float(rng.uniform(0, 6.28))),
        SphericalPlacement(float(rng.uniform(0.2, 50)), float(rng.uniform(0, 1.4)), float(rng.uniform(0, 6.28))),
        tx_ant, rx_ant)
    return cfg, prof, link


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import report_lines
    except ImportError:
        return
    lines = report_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
