import pytest

from phaseswitch.params import SystemParams, two_pi_ghz, two_pi_mhz

GAMMA = two_pi_mhz(6.0)
KAPPA = two_pi_ghz(25.5)


@pytest.fixture
def lab():
    """eta = 8, k = 0.8 at the experimental cavity linewidth."""
    return SystemParams.from_cooperativity(8.0, 0.8, KAPPA, GAMMA)


def lossless(eta, delta=0.0):
    return SystemParams.from_cooperativity(eta, 1.0, KAPPA, GAMMA,
                                           delta_a=-delta)


def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_log import RESULTS, sort_key

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(RESULTS, key=sort_key):
        terminalreporter.write_line(line)
