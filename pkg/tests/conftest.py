import pytest
from hypothesis import HealthCheck, settings

from reesalg.algebra import make_ring
from reesalg.blowup import BlowupInstance
from reesalg.calibration import calibrate

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

EX28 = ["x1^4", "x1^3*x2", "x1*x2^3", "x2^4"]

# filled by test_acceptance; printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session", autouse=True)
def calibrated():
    rec = calibrate(32003)
    assert rec.passed
    return rec


@pytest.fixture(scope="session")
def ex28():
    R = make_ring(32003, ["x0", "x1", "x2"])
    return BlowupInstance.of(R, EX28, label="ex28")


@pytest.fixture(scope="session")
def ex28_plane():
    R = make_ring(32003, ["x1", "x2"])
    return BlowupInstance.of(R, EX28, label="ex28-plane")


@pytest.fixture(scope="session")
def cusp():
    R = make_ring(32003, ["x", "y", "z"])
    return BlowupInstance.of(R, ["x"], ["x*y^2 - z^3"], label="cusp")


@pytest.fixture(scope="session")
def plane_max():
    R = make_ring(32003, ["x", "y"])
    return BlowupInstance.of(R, ["x", "y"], label="m")
