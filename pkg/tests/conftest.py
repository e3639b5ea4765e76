import numpy as np
import pytest

from hresopt.components import ComponentCatalog
from hresopt.timeseries import HOURS, HourlySeries, ScenarioData, SiteConfig, SynthesisParams, synth_scenario


@pytest.fixture(scope="session")
def catalog():
    return ComponentCatalog()


@pytest.fixture(scope="session")
def scenario():
    return synth_scenario(SiteConfig(), SynthesisParams(), 1)


def flat_scenario(ghi=0.0, diffuse=0.0, temp=25.0, wind=0.0, load=1000.0, waste=0.0, site=None):
    """Scenario with constant series, handy for hand-checked dispatch cases."""
    def s(v, unit):
        return HourlySeries(np.broadcast_to(np.asarray(v, float), (HOURS,)).copy(), unit)
    return ScenarioData(s(ghi, "W/m²"), s(diffuse, "W/m²"), s(temp, "°C"), s(wind, "m/s"),
                        s(load, "W"), s(waste, "kg"), site or SiteConfig())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
