"""Device models for the wind turbine, PV array, biogas engine and battery bank.

Defaults for quantities the datasheets do not carry (speed thresholds, swept
area, thermal coefficients, gas yield, SOC window, maintenance) are
configuration, not measured values.
"""
from dataclasses import dataclass, field

import numpy as np

from ._kernels import soc_update
from .timeseries import SiteConfig

KCAL_PER_KWH = 860.0


@dataclass(frozen=True)
class WindTurbineSpec:
    rated_power_w: float = 1000.0
    cut_in_ms: float = 2.5
    rated_ms: float = 11.0
    cut_out_ms: float = 25.0
    swept_area_m2: float = 4.52
    efficiency: float = 0.9
    h_low_m: float = 11.0
    h_high_m: float = 40.0
    capital_cost_usd: float = 2400.0
    tower_cost_per_m_usd: float = 55.0
    maint_per_year_usd: float = 24.0
    tower_maint_per_m_year_usd: float = 0.55

    def __post_init__(self):
        if not 0 < self.cut_in_ms < self.rated_ms < self.cut_out_ms:
            raise ValueError("need 0 < cut_in < rated < cut_out")
        if not 0 < self.efficiency <= 1:
            raise ValueError("turbine efficiency must be in (0, 1]")
        if self.swept_area_m2 <= 0:
            raise ValueError("swept area must be positive")
        if not self.h_low_m < self.h_high_m:
            raise ValueError("need h_low < h_high")

    @property
    def rated_specific_power(self):
        return self.rated_power_w / self.swept_area_m2


@dataclass(frozen=True)
class PVModuleSpec:
    voc_stc_v: float = 64.8
    isc_stc_a: float = 6.24
    vmax_v: float = 54.7
    imax_a: float = 5.86
    pmax_w: float = 320.0
    capital_cost_usd: float = 640.0
    maint_per_year_usd: float = 6.4
    kv_v_per_c: float = 0.176
    ki_a_per_c: float = 0.0035
    noct_c: float = 47.0
    converter_efficiency: float = 0.95
    n_series: int = 1
    n_parallel_per_unit: int = 1

    def __post_init__(self):
        if not (self.vmax_v < self.voc_stc_v and self.imax_a < self.isc_stc_a):
            raise ValueError("maximum-power point must lie inside (Voc, Isc)")
        if not 0 < self.converter_efficiency <= 1:
            raise ValueError("converter efficiency must be in (0, 1]")
        if not 0 < self.fill_factor < 1:
            raise ValueError("fill factor must be in (0, 1)")

    @property
    def fill_factor(self):
        return (self.vmax_v * self.imax_a) / (self.voc_stc_v * self.isc_stc_a)


@dataclass(frozen=True)
class BiogasSpec:
    rated_power_w: float = 3000.0
    engine_cost_usd: float = 720.0
    engine_maint_per_year_usd: float = 7.2
    digester_volume_m3: float = 22.183
    digester_cost_usd: float = 2550.0
    digester_maint_per_year_usd: float = 25.5
    gas_rate_m3_per_kg: float = 0.05
    calorific_kcal_per_m3: float = 4700.0
    engine_efficiency: float = 0.30

    def __post_init__(self):
        if not 0 < self.engine_efficiency <= 1:
            raise ValueError("engine efficiency must be in (0, 1]")
        if self.gas_rate_m3_per_kg <= 0 or self.calorific_kcal_per_m3 <= 0:
            raise ValueError("gas rate and calorific value must be positive")


@dataclass(frozen=True)
class BatterySpec:
    voltage_v: float = 12.0
    capacity_ah: float = 357.0
    capital_cost_usd: float = 1239.0
    maint_per_year_usd: float = 12.39
    self_discharge_per_day: float = 0.002
    charge_efficiency: float = 0.8
    discharge_efficiency: float = 1.0
    soc_min: float = 0.2
    soc_max: float = 1.0
    life_years: float = 10.0

    def __post_init__(self):
        if not 0 <= self.soc_min < self.soc_max <= 1:
            raise ValueError("need 0 <= soc_min < soc_max <= 1")
        if not 0 < self.charge_efficiency <= 1 or not 0 < self.discharge_efficiency <= 1:
            raise ValueError("battery efficiencies must be in (0, 1]")


@dataclass(frozen=True)
class BatteryBank:
    n_series: int
    n_parallel: int
    total_capacity_ah: float
    energy_max_kwh: float

    @property
    def n_batteries(self):
        return self.n_series * self.n_parallel


@dataclass(frozen=True)
class ComponentCatalog:
    """Device specs plus the model-convention switches.

    ``transposition`` selects the beam-ratio numerator ("paper": φ+β,
    "standard": φ-β). ``voc_convention`` selects V_oc = Voc_stc - K_V*T_C
    ("paper") or ``- K_V*(T_C - 25)`` ("delta25"). ``initial_soc`` of None
    starts the battery full.
    """

    wind: WindTurbineSpec = field(default_factory=WindTurbineSpec)
    pv: PVModuleSpec = field(default_factory=PVModuleSpec)
    biogas: BiogasSpec = field(default_factory=BiogasSpec)
    battery: BatterySpec = field(default_factory=BatterySpec)
    transposition: str = "paper"
    voc_convention: str = "paper"
    initial_soc: float | None = None

    def __post_init__(self):
        if self.transposition not in ("paper", "standard"):
            raise ValueError(f"unknown transposition convention {self.transposition!r}")
        if self.voc_convention not in ("paper", "delta25"):
            raise ValueError(f"unknown V_oc convention {self.voc_convention!r}")
        b = self.battery
        if self.initial_soc is not None and not b.soc_min <= self.initial_soc <= b.soc_max:
            raise ValueError("initial SOC outside the battery window")

    @property
    def start_soc(self):
        return self.battery.soc_max if self.initial_soc is None else self.initial_soc


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


# -- wind --------------------------------------------------------------------

def wind_specific_power(v_ms, spec: WindTurbineSpec):
    """Specific power (W/m^2) of the turbine at hub wind speed ``v_ms``.

    The rated term is the rated power per swept area, so that multiplying by
    the swept area (:func:`wind_electric_power`) gives watts.
    """
    v = np.asarray(v_ms, dtype=float)
    if np.any(v < 0):
        raise ValueError("wind speed must be non-negative")
    pr = spec.rated_specific_power
    span = spec.rated_ms**3 - spec.cut_in_ms**3
    a = pr / span
    b = spec.cut_in_ms**3 / span
    out = np.where(v < spec.cut_in_ms, 0.0,
                   np.where(v < spec.rated_ms, a * v**3 - b * pr,
                            np.where(v < spec.cut_out_ms, pr, 0.0)))
    return _out(out)


def wind_speed_at_height(v_ref_ms, h_m, site: SiteConfig):
    if np.any(np.asarray(h_m) <= 0):
        raise ValueError("height must be positive")
    v = np.asarray(v_ref_ms, dtype=float)
    if np.any(v < 0):
        raise ValueError("wind speed must be non-negative")
    return _out(v * (np.asarray(h_m) / site.reference_height_m) ** site.power_law_alpha)


def wind_electric_power(p_w_specific, spec: WindTurbineSpec, n_wg):
    if n_wg < 0:
        raise ValueError("turbine count must be non-negative")
    p = np.asarray(p_w_specific, dtype=float)
    return _out(p * spec.swept_area_m2 * spec.efficiency * n_wg)


# -- photovoltaic ------------------------------------------------------------

def pv_cell_temperature(t_ambient_c, g_tilt_wm2, spec: PVModuleSpec):
    g = np.asarray(g_tilt_wm2, dtype=float)
    if np.any(g < 0):
        raise ValueError("irradiance must be non-negative")
    return _out(np.asarray(t_ambient_c, dtype=float) + (spec.noct_c - 20.0) * g / 1000.0)


def pv_module_power(g_tilt_wm2, t_ambient_c, spec: PVModuleSpec, voc_convention="paper"):
    """Power of a single module (W): V_oc * I_sc * FF with STC fill factor."""
    g = np.asarray(g_tilt_wm2, dtype=float)
    tc = np.asarray(pv_cell_temperature(t_ambient_c, g, spec))
    t_ref = 0.0 if voc_convention == "paper" else 25.0
    voc = spec.voc_stc_v - spec.kv_v_per_c * (tc - t_ref)
    isc = (spec.isc_stc_a + spec.ki_a_per_c * (tc - 25.0)) * g / 1000.0
    return _out(np.maximum(voc * isc * spec.fill_factor, 0.0))


def pv_array_power(p_module_w, n_pv, spec: PVModuleSpec):
    """Array output after the converter: eta_PV * N_pv * module power."""
    if n_pv < 0:
        raise ValueError("module count must be non-negative")
    p = np.asarray(p_module_w, dtype=float)
    if np.any(p < 0):
        raise ValueError("module power must be non-negative")
    return _out(spec.converter_efficiency * n_pv * p)


# -- biogas ------------------------------------------------------------------

def biogas_volume(waste_kg, spec: BiogasSpec):
    """Gas (m^3) from one day's food waste, capped at the digester volume."""
    w = np.asarray(waste_kg, dtype=float)
    if np.any(w < 0):
        raise ValueError("waste mass must be non-negative")
    return _out(np.minimum(w * spec.gas_rate_m3_per_kg, spec.digester_volume_m3))


def biogas_power(v_bio_m3, spec: BiogasSpec, n_bio):
    """Average power (W) over an hour burning ``v_bio_m3``, capped at installed rating."""
    v = np.asarray(v_bio_m3, dtype=float)
    if np.any(v < 0) or n_bio < 0:
        raise ValueError("gas volume and engine count must be non-negative")
    raw = v * spec.calorific_kcal_per_m3 * spec.engine_efficiency / KCAL_PER_KWH * 1000.0
    return _out(np.minimum(raw, n_bio * spec.rated_power_w))


def hourly_gas_supply(food_waste_kg, spec: BiogasSpec):
    """Per-hour gas (m^3): each day's capped production spread evenly over its 24 hours."""
    w = np.asarray(food_waste_kg, dtype=float)
    daily = biogas_volume(w.reshape(-1, 24).sum(axis=1), spec)
    return np.repeat(np.asarray(daily) / 24.0, 24)


# -- battery -----------------------------------------------------------------

def battery_bank_layout(n_pbat, spec: BatterySpec, site: SiteConfig):
    """Series/parallel layout of the bank on the DC bus.

    Stored energy is rated at the bus voltage (series string voltage).
    """
    if n_pbat < 0:
        raise ValueError("parallel string count must be non-negative")
    ratio = site.bus_voltage_v / spec.voltage_v
    n_series = int(round(ratio))
    if n_series < 1 or abs(ratio - n_series) > 1e-9:
        raise ValueError(f"bus voltage {site.bus_voltage_v} V is not a multiple of {spec.voltage_v} V")
    cap = n_pbat * spec.capacity_ah
    return BatteryBank(n_series=n_series, n_parallel=int(n_pbat), total_capacity_ah=cap,
                       energy_max_kwh=cap * n_series * spec.voltage_v / 1000.0)


def soc_step(soc_prev, net_power_w, dt_h, bank: BatteryBank, spec: BatterySpec):
    """Advance the battery one step.

    Returns ``(soc_new, charged_wh, discharged_wh, unmet_wh, surplus_wh)``.
    All energies are bus-side: ``charged_wh`` is taken from the bus (stored
    energy is ``charge_efficiency * charged_wh``) and ``discharged_wh`` is
    delivered to it. The bookkeeping identity is

        net_power_w * dt_h == charged_wh - discharged_wh + surplus_wh - unmet_wh

    Self-discharge ``soc * sigma * dt / 24`` is applied first and never takes
    the SOC below ``soc_min``.
    """
    if not spec.soc_min - 1e-12 <= soc_prev <= spec.soc_max + 1e-12:
        raise ValueError(f"soc {soc_prev} outside [{spec.soc_min}, {spec.soc_max}]")
    if dt_h <= 0:
        raise ValueError("time step must be positive")
    return soc_update.py_func(
        float(soc_prev), float(net_power_w), float(dt_h), bank.energy_max_kwh * 1000.0,
        spec.self_discharge_per_day, spec.charge_efficiency, spec.discharge_efficiency,
        spec.soc_min, spec.soc_max)
