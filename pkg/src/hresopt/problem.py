"""The sizing problem as an optimizer objective, plus a small enumerable instance."""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .components import ComponentCatalog
from .dispatch import DesignVector, prepare_scenario, simulate_year
from .economics import EconConfig, FitnessConfig, check_constraints, fitness, system_cost
from .optimize import SearchSpace
from .timeseries import DEFAULT_DAILY_PROFILE, ScenarioData, SiteConfig, SynthesisParams, synth_scenario

# n_pv, n_wg, n_bat_parallel, tilt, h, n_bio
DESIGN_FIELDS = ("n_pv", "n_wg", "n_bat_parallel", "tilt_deg", "hub_height_m", "n_bio")
DEFAULT_LOWER = (1, 1, 1, 0.0, 11.0, 1)
DEFAULT_UPPER = (1000, 100, 1000, 90.0, 40.0, 10)
INTEGER_MASK = (True, True, True, False, False, True)


def default_space(catalog: ComponentCatalog | None = None, lower=DEFAULT_LOWER, upper=DEFAULT_UPPER):
    """Design bounds; the hub-height range follows the turbine spec when a catalog is given."""
    lower, upper = list(lower), list(upper)
    if catalog is not None:
        lower[4], upper[4] = catalog.wind.h_low_m, catalog.wind.h_high_m
    return SearchSpace(np.array(lower, float), np.array(upper, float), np.array(INTEGER_MASK))


@dataclass
class HRESProblem:
    """Callable objective mapping a position vector to the penalised lifetime cost.

    Safe to call from several threads: the prepared scenario is read-only.
    """

    scenario: ScenarioData
    catalog: ComponentCatalog = field(default_factory=ComponentCatalog)
    econ: EconConfig = field(default_factory=EconConfig)
    fcfg: FitnessConfig = field(default_factory=FitnessConfig)
    space: SearchSpace | None = None

    def __post_init__(self):
        if self.space is None:
            self.space = default_space(self.catalog)
        self.prepared = prepare_scenario(self.scenario, self.catalog)

    def design(self, x):
        return DesignVector.from_position(x)

    def __call__(self, x):
        return fitness(self.design(x), self.scenario, self.catalog, self.econ, self.fcfg,
                       prepared=self.prepared)

    def describe(self, x):
        """Cost, LPSP and feasibility of one position."""
        d = self.design(x)
        sim = simulate_year(d, self.scenario, self.catalog, prepared=self.prepared)
        return {
            "design": d,
            "cost": system_cost(d, self.catalog, self.econ),
            "fitness": self(x),
            "lpsp": sim.lpsp,
            "feasible": check_constraints(d, self.catalog).feasible,
            "simulation": sim,
        }


MINI_LOAD_SCALE = 0.08
MINI_WASTE_KG = 20.0
MINI_LOWER = (4, 1, 1, 20, 11, 1)
MINI_UPPER = (24, 3, 8, 22, 14, 2)


def mini_problem(seed=7, econ: EconConfig | None = None, fcfg: FitnessConfig | None = None):
    """A scaled-down site with an all-integer lattice of 12,096 designs."""
    params = SynthesisParams(
        load_profile_w=tuple(MINI_LOAD_SCALE * v for v in DEFAULT_DAILY_PROFILE),
        waste_per_day_kg=MINI_WASTE_KG,
    )
    scenario = synth_scenario(SiteConfig(), params, seed)
    space = SearchSpace(np.array(MINI_LOWER, float), np.array(MINI_UPPER, float), np.ones(6, bool))
    return HRESProblem(scenario, econ=econ or EconConfig(), fcfg=fcfg or FitnessConfig(), space=space)


def lattice(space: SearchSpace):
    if not space.integer_mask.all():
        raise ValueError("enumeration needs every dimension integer-masked")
    axes = [np.arange(np.ceil(lo), np.floor(hi) + 1) for lo, hi in zip(space.lower, space.upper)]
    return itertools.product(*axes)


def lattice_size(space: SearchSpace):
    return int(np.prod(np.floor(space.upper) - np.ceil(space.lower) + 1))


def brute_force(objective, space: SearchSpace):
    """Exhaustive minimum over the integer lattice; returns (fitness, position)."""
    best_f, best_x = np.inf, None
    for point in lattice(space):
        x = np.array(point, dtype=float)
        f = objective(x)
        if f < best_f:
            best_f, best_x = f, x
    return best_f, best_x
