import numpy as np
import pytest
from conftest import flat_scenario
from numpy.testing import assert_allclose

from hresopt import _kernels as K
from hresopt.components import BatterySpec, ComponentCatalog
from hresopt.dispatch import DesignVector, SimulationResult, lpsp_of, simulate_year, write_trace_csv

# seed-1 default scenario, design (60, 2, 4, 20°, 20 m, 1), pinned on first run
PINNED_DESIGN = DesignVector(60, 2, 4, 20.0, 20.0, 1)
PINNED_LPSP = 0.33340466370543137
PINNED_UNMET_WH = 19733761.99302114
PINNED_SURPLUS_WH = 63475.63235346257


def test_zero_design_lpsp_one(scenario, catalog):
    r = simulate_year(DesignVector(0, 0, 0, 0.0, 11.0, 0), scenario, catalog)
    assert r.lpsp == 1.0
    assert r.total_unmet_wh == pytest.approx(r.total_demand_wh)


def test_oversized_design_lpsp_zero(scenario, catalog):
    r = simulate_year(DesignVector(2000, 10, 200, 10.0, 30.0, 10), scenario, catalog)
    assert r.lpsp == 0.0
    assert r.total_unmet_wh == 0.0


def test_pinned_regression(scenario, catalog):
    a = simulate_year(PINNED_DESIGN, scenario, catalog)
    b = simulate_year(PINNED_DESIGN, scenario, catalog)
    assert a.lpsp == b.lpsp and a.total_unmet_wh == b.total_unmet_wh
    assert_allclose(a.lpsp, PINNED_LPSP, rtol=1e-9)
    assert_allclose(a.total_unmet_wh, PINNED_UNMET_WH, rtol=1e-9)
    assert_allclose(a.total_surplus_wh, PINNED_SURPLUS_WH, rtol=1e-9)


def test_backends_agree(scenario, catalog):
    rng = np.random.default_rng(5)
    for _ in range(5):
        d = DesignVector(int(rng.integers(0, 200)), int(rng.integers(0, 6)), int(rng.integers(0, 20)),
                         float(rng.uniform(0, 90)), float(rng.uniform(11, 40)), int(rng.integers(0, 3)))
        a = simulate_year(d, scenario, catalog, trace=True, backend="numba")
        b = simulate_year(d, scenario, catalog, trace=True, backend="numpy")
        assert_allclose(a.lpsp, b.lpsp, rtol=1e-9, atol=1e-12)
        assert_allclose(a.hourly_traces, b.hourly_traces, rtol=1e-9, atol=1e-6)


def test_biogas_only_hand_case(catalog):
    # 10 kg/h → 12 m³/day → 0.5 m³/h → 0.5*4700*0.3/860 kW
    s = flat_scenario(load=1000.0, waste=10.0)
    r = simulate_year(DesignVector(0, 0, 0, 0.0, 11.0, 1), s, catalog)
    bio_w = 0.5 * 4700 * 0.3 / 860 * 1000
    assert_allclose(r.lpsp, (1000.0 - bio_w) / 1000.0, rtol=1e-12)
    assert_allclose(r.generation_by_source_wh["biogas"], bio_w * 8760, rtol=1e-12)


def test_battery_drain_hand_case(catalog):
    # no generation; a full bank drains with self-discharge until soc_min
    bat = catalog.battery
    s = flat_scenario(load=1000.0)
    r = simulate_year(DesignVector(0, 0, 1, 0.0, 11.0, 0), s, catalog, trace=True)
    e = 2 * bat.voltage_v * bat.capacity_ah
    soc, delivered = bat.soc_max, 0.0
    for _ in range(8760):
        soc = max(soc * (1 - bat.self_discharge_per_day / 24), bat.soc_min)
        take = min(1000.0, (soc - bat.soc_min) * e * bat.discharge_efficiency)
        soc -= take / (e * bat.discharge_efficiency)
        delivered += take
    assert_allclose(r.discharge_wh, delivered, rtol=1e-12)
    assert_allclose(r.total_unmet_wh, 8760 * 1000.0 - delivered, rtol=1e-12)
    assert r.final_soc == pytest.approx(bat.soc_min)


def test_initial_soc_override(catalog):
    s = flat_scenario(load=1000.0)
    low = ComponentCatalog(initial_soc=catalog.battery.soc_min)
    r = simulate_year(DesignVector(0, 0, 3, 0.0, 11.0, 0), s, low)
    assert r.lpsp == 1.0


def test_trace_balance_and_soc(scenario, catalog):
    r = simulate_year(PINNED_DESIGN, scenario, catalog, trace=True)
    tr = r.hourly_traces
    cols = {c: tr[:, i] for i, c in enumerate(K.TRACE_COLUMNS)}
    gen = cols["wind_w"] + cols["pv_w"] + cols["bio_w"]
    residual = gen + cols["discharge_wh"] + cols["unmet_wh"] - cols["load_w"] - cols["charge_wh"] - cols["surplus_wh"]
    assert np.abs(residual).max() < 1e-6
    bat = catalog.battery
    assert cols["soc"].min() >= bat.soc_min and cols["soc"].max() <= bat.soc_max
    assert_allclose(cols["unmet_wh"].sum(), r.total_unmet_wh, rtol=1e-12)


def test_trace_csv(tmp_path, scenario, catalog):
    r = simulate_year(PINNED_DESIGN, scenario, catalog, trace=True)
    path = write_trace_csv(r, tmp_path / "t.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "hour,wind_w,pv_w,bio_w,load_w,soc,charge_wh,discharge_wh,unmet_wh,surplus_wh"
    assert len(lines) == 8761
    with pytest.raises(ValueError):
        write_trace_csv(simulate_year(PINNED_DESIGN, scenario, catalog), tmp_path / "u.csv")


@pytest.mark.parametrize("design", [DesignVector(-1, 0, 0, 0.0, 11.0, 0), DesignVector(1, 1, 1, 95.0, 11.0, 1),
                                    DesignVector(1, 1, 1, 10.0, 0.0, 1)])
def test_invalid_designs(design, scenario, catalog):
    with pytest.raises(ValueError):
        simulate_year(design, scenario, catalog)


def test_invalid_scenario(scenario, catalog):
    from hresopt.timeseries import HourlySeries, ScenarioData
    kw = scenario.series()
    kw["load"] = HourlySeries(np.ones(10), "W")
    with pytest.raises(ValueError, match="invalid scenario"):
        simulate_year(PINNED_DESIGN, ScenarioData(site=scenario.site, **kw), catalog)


def _result(unmet, demand):
    return SimulationResult(lpsp=0.0, total_demand_wh=demand, total_unmet_wh=unmet, total_surplus_wh=0.0,
                            energy_served_wh=demand - unmet, generation_by_source_wh={}, final_soc=1.0)


@pytest.mark.parametrize("unmet, demand, expected", [(0, 1000, 0.0), (1000, 1000, 1.0), (500, 1000, 0.5), (0, 0, 0.0)])
def test_lpsp_of(unmet, demand, expected):
    assert lpsp_of(_result(unmet, demand)) == expected


def test_design_from_position_rounds():
    d = DesignVector.from_position([3.6, 1.2, 7.5, 12.3, 20.0, 0.4])
    assert (d.n_pv, d.n_wg, d.n_bat_parallel, d.n_bio) == (4, 1, 8, 0)
    assert d.tilt_deg == 12.3 and d.n_batteries == 16


def test_battery_spec_invariants():
    with pytest.raises(ValueError):
        BatterySpec(soc_min=0.9, soc_max=0.8)
