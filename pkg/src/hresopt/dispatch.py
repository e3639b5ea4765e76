"""One-year hourly operation of a candidate design.

Every hour: renewables (wind, PV, must-run biogas) serve the load, surplus
charges the bank up to SOC_max, deficit discharges it down to SOC_min, and
whatever is left is curtailed or unmet. The SOC carries over between hours.

Two interchangeable paths compute the same thing: a fused numba kernel and a
numpy path built from the component functions. ``HRESOPT_DISABLE_NUMBA=1``
selects the latter.
"""
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels as K
from . import components as comp
from . import solar
from ._accel import USE_NUMBA
from .timeseries import ScenarioData, hour_geometry, validate_scenario


@dataclass(frozen=True)
class DesignVector:
    n_pv: int
    n_wg: int
    n_bat_parallel: int
    tilt_deg: float
    hub_height_m: float
    n_bio: int

    def as_array(self):
        return np.array([self.n_pv, self.n_wg, self.n_bat_parallel,
                         self.tilt_deg, self.hub_height_m, self.n_bio], dtype=float)

    @classmethod
    def from_position(cls, x):
        """Build from an optimizer position (n_pv, n_wg, n_bat, tilt, h, n_bio); counts are rounded."""
        x = np.asarray(x, dtype=float)
        return cls(int(round(x[0])), int(round(x[1])), int(round(x[2])),
                   float(x[3]), float(x[4]), int(round(x[5])))

    @property
    def n_batteries(self):
        return 2 * self.n_bat_parallel


@dataclass(frozen=True)
class SimulationResult:
    lpsp: float
    total_demand_wh: float
    total_unmet_wh: float
    total_surplus_wh: float
    energy_served_wh: float
    generation_by_source_wh: dict
    final_soc: float
    charge_wh: float = 0.0
    discharge_wh: float = 0.0
    max_balance_residual_wh: float = 0.0
    hourly_traces: np.ndarray | None = field(default=None, repr=False)


def lpsp_of(result):
    """Unmet over demanded energy; 0 when nothing is demanded."""
    if result.total_demand_wh < 0:
        raise ValueError("total demand must be non-negative")
    if result.total_demand_wh == 0:
        return 0.0
    return result.total_unmet_wh / result.total_demand_wh


@dataclass(frozen=True)
class PreparedScenario:
    """Design-independent arrays for one (scenario, catalog) pair."""

    scenario: ScenarioData
    catalog: comp.ComponentCatalog
    load: np.ndarray
    ghi: np.ndarray
    diffuse: np.ndarray
    temp: np.ndarray
    wind_ref: np.ndarray
    cdcw: np.ndarray
    sin_dec: np.ndarray
    cos_zen: np.ndarray
    declination: np.ndarray
    hour_angle: np.ndarray
    gas_m3: np.ndarray


def prepare_scenario(scenario: ScenarioData, catalog: comp.ComponentCatalog):
    problems = validate_scenario(scenario)
    if problems:
        raise ValueError(f"invalid scenario: {problems[0]}")
    _, dec, ome = hour_geometry(scenario.site.latitude_deg)
    phi = np.radians(scenario.site.latitude_deg)
    cdcw = np.cos(np.radians(dec)) * np.cos(np.radians(ome))
    sin_dec = np.sin(np.radians(dec))
    c = np.ascontiguousarray
    return PreparedScenario(
        scenario=scenario,
        catalog=catalog,
        load=c(scenario.load.values),
        ghi=c(scenario.ghi.values),
        diffuse=c(scenario.diffuse.values),
        temp=c(scenario.ambient_temp.values),
        wind_ref=c(scenario.wind_speed_ref.values),
        cdcw=cdcw,
        sin_dec=sin_dec,
        cos_zen=np.cos(phi) * cdcw + np.sin(phi) * sin_dec,
        declination=dec,
        hour_angle=ome,
        gas_m3=comp.hourly_gas_supply(scenario.food_waste.values, catalog.biogas),
    )


def check_design(design: DesignVector):
    for name in ("n_pv", "n_wg", "n_bat_parallel", "n_bio"):
        if getattr(design, name) < 0:
            raise ValueError(f"{name} must be non-negative, got {getattr(design, name)}")
    if not 0.0 <= design.tilt_deg <= 90.0:
        raise ValueError(f"tilt {design.tilt_deg} outside [0, 90]°")
    if design.hub_height_m <= 0:
        raise ValueError(f"hub height must be positive, got {design.hub_height_m}")


def pack_params(design: DesignVector, prep: PreparedScenario):
    cat = prep.catalog
    site = prep.scenario.site
    w, pv, bio, bat = cat.wind, cat.pv, cat.biogas, cat.battery
    bank = comp.battery_bank_layout(design.n_bat_parallel, bat, site)
    sign = 1.0 if cat.transposition == "paper" else -1.0
    tilted = np.radians(site.latitude_deg + sign * design.tilt_deg)
    span = w.rated_ms**3 - w.cut_in_ms**3

    p = np.zeros(K.N_PARAMS)
    p[K.P_N_PV] = design.n_pv
    p[K.P_N_WG] = design.n_wg
    p[K.P_N_BIO] = design.n_bio
    p[K.P_E_MAX_WH] = bank.energy_max_kwh * 1000.0
    p[K.P_V_CI] = w.cut_in_ms
    p[K.P_V_R] = w.rated_ms
    p[K.P_V_CO] = w.cut_out_ms
    p[K.P_PR_SPEC] = w.rated_specific_power
    p[K.P_WIND_A] = w.rated_specific_power / span
    p[K.P_WIND_B] = w.cut_in_ms**3 / span
    p[K.P_AREA_ETA] = w.swept_area_m2 * w.efficiency
    p[K.P_WIND_FACTOR] = (design.hub_height_m / site.reference_height_m) ** site.power_law_alpha
    p[K.P_COS_TILTED] = np.cos(tilted)
    p[K.P_SIN_TILTED] = np.sin(tilted)
    p[K.P_COS_BETA] = np.cos(np.radians(design.tilt_deg))
    p[K.P_RHO] = site.ground_reflectance
    p[K.P_NOCT] = pv.noct_c
    p[K.P_VOC_STC] = pv.voc_stc_v
    p[K.P_KV] = pv.kv_v_per_c
    p[K.P_VOC_TREF] = 0.0 if cat.voc_convention == "paper" else 25.0
    p[K.P_ISC_STC] = pv.isc_stc_a
    p[K.P_KI] = pv.ki_a_per_c
    p[K.P_FF] = pv.fill_factor
    p[K.P_ETA_PV] = pv.converter_efficiency
    p[K.P_BIO_W_PER_M3] = bio.calorific_kcal_per_m3 * bio.engine_efficiency / comp.KCAL_PER_KWH * 1000.0
    p[K.P_BIO_CAP_W] = design.n_bio * bio.rated_power_w
    p[K.P_SIGMA] = bat.self_discharge_per_day
    p[K.P_ETA_C] = bat.charge_efficiency
    p[K.P_ETA_D] = bat.discharge_efficiency
    p[K.P_SOC_MIN] = bat.soc_min
    p[K.P_SOC_MAX] = bat.soc_max
    p[K.P_SOC0] = cat.start_soc
    return p


def generation_profiles(design: DesignVector, prep: PreparedScenario):
    """Hourly wind, PV and biogas power (W) via the vectorised component models."""
    cat = prep.catalog
    site = prep.scenario.site
    v_h = comp.wind_speed_at_height(prep.wind_ref, design.hub_height_m, site)
    wind = comp.wind_electric_power(comp.wind_specific_power(v_h, cat.wind), cat.wind, design.n_wg)
    rb = solar.beam_ratio_array(site.latitude_deg, design.tilt_deg, prep.declination,
                                prep.hour_angle, cat.transposition)
    gt = solar.tilted_irradiance(prep.ghi, prep.diffuse, rb, design.tilt_deg, site.ground_reflectance)
    module = comp.pv_module_power(gt, prep.temp, cat.pv, cat.voc_convention)
    pv = comp.pv_array_power(module, design.n_pv, cat.pv)
    bio = comp.biogas_power(prep.gas_m3, cat.biogas, design.n_bio)
    return wind, pv, bio


def _simulate_numpy(design, prep, record):
    wind, pv, bio = generation_profiles(design, prep)
    bat = prep.catalog.battery
    e_max = comp.battery_bank_layout(design.n_bat_parallel, bat, prep.scenario.site).energy_max_kwh * 1000.0
    gen = wind + pv + bio
    net = gen - prep.load
    n = len(net)
    flows = np.zeros((n, 5))
    step = K.soc_update.py_func
    soc = prep.catalog.start_soc
    args = (e_max, bat.self_discharge_per_day, bat.charge_efficiency, bat.discharge_efficiency,
            bat.soc_min, bat.soc_max)
    for t, x in enumerate(net.tolist()):
        soc, ch, dis, un, sur = step(soc, x, 1.0, *args)
        flows[t] = soc, ch, dis, un, sur
    soc_tr, ch, dis, un, sur = flows.T
    totals = np.zeros(K.N_TOTALS)
    totals[K.T_DEMAND] = prep.load.sum()
    totals[K.T_UNMET] = un.sum()
    totals[K.T_SURPLUS] = sur.sum()
    totals[K.T_WIND] = wind.sum()
    totals[K.T_PV] = pv.sum()
    totals[K.T_BIO] = bio.sum()
    totals[K.T_CHARGE] = ch.sum()
    totals[K.T_DISCHARGE] = dis.sum()
    totals[K.T_MAX_RESIDUAL] = np.abs(gen + dis + un - prep.load - ch - sur).max(initial=0.0)
    trace = None
    if record:
        trace = np.column_stack([wind, pv, bio, prep.load, soc_tr, ch, dis, un, sur])
    return totals, soc, trace


def _simulate_numba(design, prep, record):
    p = pack_params(design, prep)
    trace = np.zeros((len(prep.load) if record else 0, len(K.TRACE_COLUMNS)))
    totals, soc = K.simulate_kernel(prep.load, prep.ghi, prep.diffuse, prep.temp, prep.wind_ref,
                                    prep.cdcw, prep.sin_dec, prep.cos_zen, prep.gas_m3, p, trace)
    return totals, soc, trace if record else None


def simulate_year(design: DesignVector, scenario: ScenarioData, catalog: comp.ComponentCatalog,
                  trace=False, prepared: PreparedScenario | None = None, backend=None):
    """Run the hourly strategy over the whole scenario.

    ``prepared`` skips per-call scenario validation and geometry; it must
    come from :func:`prepare_scenario` with the same scenario and catalog.
    ``backend`` is "numba", "numpy" or None (follow the environment flag).
    """
    check_design(design)
    prep = prepared if prepared is not None else prepare_scenario(scenario, catalog)
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    if backend == "numba":
        totals, soc, tr = _simulate_numba(design, prep, trace)
    elif backend == "numpy":
        totals, soc, tr = _simulate_numpy(design, prep, trace)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return _result(totals, soc, tr)


def _result(totals, soc, trace):
    demand = float(totals[K.T_DEMAND])
    unmet = min(float(totals[K.T_UNMET]), demand)
    lpsp = 0.0 if demand == 0 else min(max(unmet / demand, 0.0), 1.0)
    return SimulationResult(
        lpsp=lpsp,
        total_demand_wh=demand,
        total_unmet_wh=unmet,
        total_surplus_wh=float(totals[K.T_SURPLUS]),
        energy_served_wh=demand - unmet,
        generation_by_source_wh={
            "wind": float(totals[K.T_WIND]),
            "pv": float(totals[K.T_PV]),
            "biogas": float(totals[K.T_BIO]),
        },
        final_soc=float(soc),
        charge_wh=float(totals[K.T_CHARGE]),
        discharge_wh=float(totals[K.T_DISCHARGE]),
        max_balance_residual_wh=float(totals[K.T_MAX_RESIDUAL]),
        hourly_traces=trace,
    )


def write_trace_csv(result: SimulationResult, path):
    """Hourly trace as CSV; charge/discharge are bus-side energies."""
    if result.hourly_traces is None:
        raise ValueError("simulation was run without trace=True")
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("hour",) + K.TRACE_COLUMNS)
        for t, row in enumerate(result.hourly_traces):
            w.writerow([t] + [f"{x:.6f}" for x in row])
    return path
