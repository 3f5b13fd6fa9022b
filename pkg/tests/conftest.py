import pytest

from photongauge.beams import BeamSpec, make_paraxial_vortex, make_wavepacket, standard_test_packet

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def standard_packets():
    """Standard commutator test packets at the fast tier, keyed by helicity."""
    return {sigma: standard_test_packet(sigma=sigma) for sigma in (1, -1)}


@pytest.fixture(scope="session")
def small_packet():
    """Cheap 48^3 packet for structural operator tests."""
    spec = BeamSpec("wavepacket", (1.0, 1.0, 1.0), 0.08, gauge=(0.0, 0.0, 1.0), sigma=1, r0=(1.0, -0.5, 0.3))
    return make_wavepacket(spec, points=48)


@pytest.fixture(scope="session")
def vortex():
    def build(l, sigma=1, gauge=(1.0, 0.0, 0.0), divergence=0.05, points=64):
        spec = BeamSpec("paraxial_vortex", (0.0, 0.0, 1.0), divergence, gauge=gauge, sigma=sigma, l=l)
        return make_paraxial_vortex(spec, points=points)

    return build


@pytest.fixture
def acceptance_line():
    """Record one pass/fail summary line for the acceptance report."""

    def record(number, title, passed, detail):
        ACCEPTANCE_LINES.append((number, f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
