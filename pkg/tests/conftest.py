import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mollify import (
    Window,
    gen_bump,
    gen_delta,
    gen_heaviside,
    gen_power_cusp,
    gen_weierstrass,
    make_gaussian_mollifier,
    make_lp_family,
)
from mollify.config import DEFAULTS

settings.register_profile(
    "default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gauss():
    return make_gaussian_mollifier()


@pytest.fixture(scope="session")
def lp_family():
    return make_lp_family()


@pytest.fixture(scope="session")
def window():
    return Window(*DEFAULTS.window)


@pytest.fixture(scope="session")
def ladder():
    return DEFAULTS.ladder()


@pytest.fixture(scope="session")
def cusp05():
    return gen_power_cusp(0.5)


@pytest.fixture(scope="session")
def delta():
    return gen_delta()


@pytest.fixture(scope="session")
def heaviside():
    return gen_heaviside()


@pytest.fixture(scope="session")
def bump():
    return gen_bump()


@pytest.fixture(scope="session")
def weierstrass():
    return gen_weierstrass()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Record one PASS/FAIL line per acceptance criterion; echoed in the terminal summary."""

    def log(criterion: int, passed: bool, detail: str) -> None:
        line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
