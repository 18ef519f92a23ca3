"""Shared fixtures and the acceptance-criteria reporting hook."""

import pytest

from slowlight_mzi.interferometer import DispersiveMedium, InterferometerGeometry
from slowlight_mzi.laser import LaserSpec

# Populated by tests/test_acceptance.py; printed one line per criterion at the
# end of the run so the pass/fail status of each criterion is visible at a glance.
CRITERION_RESULTS = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(CRITERION_RESULTS):
        status, detail = CRITERION_RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status} - {detail}")


@pytest.fixture(scope="session")
def criteria():
    """Record a single pass/fail line for one acceptance criterion, then assert."""

    def record(num, ok, detail):
        CRITERION_RESULTS[num] = ("PASS" if ok else "FAIL", detail)
        assert ok, f"criterion {num}: {detail}"

    return record


@pytest.fixture
def bench_laser():
    """Benchmark ring laser used throughout the published benchmark tables."""
    return LaserSpec(
        wavelength=632.8e-9, output_power=10e-3, cavity_length=0.70,
        output_coupler_reflectivity=0.9,
    )


@pytest.fixture
def demo_geometry():
    """Arm imbalance of the slow-light demonstration (tau0=1.56 ns, tau_d=0.27 ns)."""
    return InterferometerGeometry.from_time_constants(1.56e-9, 0.27e-9)


@pytest.fixture
def vacuum_medium():
    return DispersiveMedium.vacuum()
