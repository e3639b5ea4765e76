"""Lifetime cost, feasibility constraints, LPSP-gated fitness and payback."""
import math
from dataclasses import dataclass, field

from .components import ComponentCatalog
from .dispatch import DesignVector, PreparedScenario, simulate_year
from .timeseries import ScenarioData

COST_MODELS = ("paper-literal", "corrected")


@dataclass(frozen=True)
class EconConfig:
    """Cost-model settings.

    Maintenance rates are USD per unit per year; ``None`` falls back to the
    catalog entry of the matching device. ``y_bat_replacements`` of None is
    derived from the battery life as ``floor(horizon / life) - 1``.
    """

    horizon_years: int = 25
    m_pv: float | None = None
    m_wg: float | None = None
    m_h: float | None = None
    m_bat: float | None = None
    m_biogenerator: float | None = None
    m_digester: float | None = None
    y_bat_replacements: int | None = None
    tariff_usd_per_kwh: float = 0.10
    cost_model: str = "corrected"

    def __post_init__(self):
        if self.horizon_years <= 0:
            raise ValueError("horizon must be positive")
        for name in ("m_pv", "m_wg", "m_h", "m_bat", "m_biogenerator", "m_digester"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.tariff_usd_per_kwh < 0:
            raise ValueError("tariff must be non-negative")
        if self.y_bat_replacements is not None and not 0 <= self.y_bat_replacements < self.horizon_years:
            raise ValueError("battery replacements must be in [0, horizon)")
        if self.cost_model not in COST_MODELS:
            raise ValueError(f"cost model must be one of {COST_MODELS}")

    def resolved(self, catalog: ComponentCatalog):
        """Copy with every ``None`` filled in from ``catalog``."""
        def pick(v, default):
            return default if v is None else v
        y_bat = self.y_bat_replacements
        if y_bat is None:
            y_bat = max(int(self.horizon_years // catalog.battery.life_years) - 1, 0)
        return EconConfig(
            horizon_years=self.horizon_years,
            m_pv=pick(self.m_pv, catalog.pv.maint_per_year_usd),
            m_wg=pick(self.m_wg, catalog.wind.maint_per_year_usd),
            m_h=pick(self.m_h, catalog.wind.tower_maint_per_m_year_usd),
            m_bat=pick(self.m_bat, catalog.battery.maint_per_year_usd),
            m_biogenerator=pick(self.m_biogenerator, catalog.biogas.engine_maint_per_year_usd),
            m_digester=pick(self.m_digester, catalog.biogas.digester_maint_per_year_usd),
            y_bat_replacements=y_bat,
            tariff_usd_per_kwh=self.tariff_usd_per_kwh,
            cost_model=self.cost_model,
        )


@dataclass(frozen=True)
class FitnessConfig:
    lpsp_tolerance: float = 0.0
    penalty_scale_usd: float = 1e12

    def __post_init__(self):
        if self.lpsp_tolerance < 0:
            raise ValueError("LPSP tolerance must be non-negative")
        if self.penalty_scale_usd <= 0:
            raise ValueError("penalty scale must be positive")


def system_cost(design: DesignVector, catalog: ComponentCatalog, econ: EconConfig):
    """Capital plus maintenance over the horizon (USD), undiscounted.

    In "paper-literal" mode the battery term is N_bat*(C_bat + V_bat*C_bat)
    plus a single (H - Y_bat - 1)*M_bat; "corrected" charges each battery
    (Y_bat + 1) purchases and H years of maintenance. N_bat counts every
    battery, i.e. series times parallel.
    """
    for name in ("n_pv", "n_wg", "n_bat_parallel", "n_bio"):
        if getattr(design, name) < 0:
            raise ValueError(f"{name} must be non-negative")
    if design.hub_height_m < 0:
        raise ValueError("hub height must be non-negative")
    e = econ.resolved(catalog)
    years = e.horizon_years
    pv, wind, bat, bio = catalog.pv, catalog.wind, catalog.battery, catalog.biogas
    h = design.hub_height_m
    n_bat = 2 * design.n_bat_parallel

    cost = design.n_pv * (pv.capital_cost_usd + years * e.m_pv)
    cost += design.n_wg * (wind.capital_cost_usd + years * e.m_wg
                           + h * wind.tower_cost_per_m_usd + years * h * e.m_h)
    if e.cost_model == "paper-literal":
        cost += n_bat * (bat.capital_cost_usd + bat.voltage_v * bat.capital_cost_usd)
        cost += (years - e.y_bat_replacements - 1) * e.m_bat
    else:
        cost += n_bat * (bat.capital_cost_usd * (e.y_bat_replacements + 1) + years * e.m_bat)
    cost += design.n_bio * (bio.engine_cost_usd + years * e.m_biogenerator)
    cost += bio.digester_cost_usd + years * e.m_digester
    return cost


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    violations: tuple = ()
    magnitude: float = 0.0

    def __bool__(self):
        return self.feasible


def check_constraints(design: DesignVector, catalog: ComponentCatalog):
    """Positive counts, 0 <= tilt <= 90, h_low <= h <= h_high.

    ``magnitude`` sums how far each violated bound is missed (a zero count
    misses ``> 0`` by 1).
    """
    problems = []
    magnitude = 0.0
    for label, value in (("N_WG", design.n_wg), ("N_PV", design.n_pv),
                         ("N_bat", design.n_bat_parallel), ("N_bio", design.n_bio)):
        if value <= 0:
            problems.append(f"{label} not positive")
            magnitude += 1.0 - value
    beta = design.tilt_deg
    if beta < 0:
        problems.append("β below 0")
        magnitude += -beta
    elif beta > 90:
        problems.append("β above 90")
        magnitude += beta - 90
    h, lo, hi = design.hub_height_m, catalog.wind.h_low_m, catalog.wind.h_high_m
    if h < lo:
        problems.append(f"h below {lo:g}")
        magnitude += lo - h
    elif h > hi:
        problems.append(f"h above {hi:g}")
        magnitude += h - hi
    return Verdict(not problems, tuple(problems), magnitude)


def fitness(design: DesignVector, scenario: ScenarioData, catalog: ComponentCatalog,
            econ: EconConfig, fcfg: FitnessConfig, prepared: PreparedScenario | None = None):
    """System cost, plus ``penalty_scale * (LPSP + violation magnitude)`` when infeasible.

    LPSP at or below the tolerance counts as zero.
    """
    cost = system_cost(design, catalog, econ)
    verdict = check_constraints(design, catalog)
    lpsp = simulate_year(design, scenario, catalog, prepared=prepared).lpsp
    if verdict.feasible and lpsp <= fcfg.lpsp_tolerance:
        return cost
    return penalised(cost, lpsp, verdict.magnitude, fcfg)


def penalised(cost, lpsp, violation, fcfg: FitnessConfig):
    return cost + fcfg.penalty_scale_usd * (lpsp + violation)


class NeverProfitable(ValueError):
    """Zero revenue: the system never pays back."""


def payback_period(total_cost_usd, annual_energy_served_kwh, tariff_usd_per_kwh):
    """Simple undiscounted payback in days; raises :class:`NeverProfitable` for zero revenue."""
    revenue = annual_energy_served_kwh * tariff_usd_per_kwh
    if revenue <= 0:
        raise NeverProfitable("annual revenue is zero; never profitable")
    if total_cost_usd < 0:
        raise ValueError("cost must be non-negative")
    return 365.0 * total_cost_usd / revenue
