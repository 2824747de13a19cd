"""Shared fixtures plus the acceptance-gate summary printer."""

import pytest

import _registry
from pioneerlink import AtmosphereModel, QkdParams, ReceiverOptics, Scenario, run_sweep


@pytest.fixture(scope="session")
def atmosphere():
    return AtmosphereModel()


@pytest.fixture(scope="session")
def optics():
    return ReceiverOptics()


@pytest.fixture(scope="session")
def qkd_params():
    return QkdParams()


@pytest.fixture(scope="session")
def default_sweep():
    """One full default sweep shared by every test that reads sweep rows."""
    return run_sweep(Scenario(), threads=8)


@pytest.fixture(scope="session")
def curve(default_sweep):
    """Rows of one (scheme, altitude, separation) curve, ascending zenith."""

    def _curve(scheme, h_alt, separation):
        rows = [
            r for r in default_sweep
            if r.scheme == scheme and r.h_alt == h_alt and r.separation == separation
        ]
        return sorted(rows, key=lambda r: r.zenith_deg)

    return _curve


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _registry.RESULTS:
        return
    terminalreporter.section("acceptance gate")
    for number in sorted(_registry.TITLES):
        title = _registry.TITLES[number]
        status, detail = _registry.RESULTS.get(number, ("NOT RUN", ""))
        line = f"criterion {number:02d} {status:7s} {title}"
        if detail:
            line += f" :: {detail}"
        terminalreporter.write_line(line)
