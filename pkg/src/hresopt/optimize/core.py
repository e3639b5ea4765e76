import logging
import time
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchSpace:
    """Box bounds with an integer lattice on masked dimensions."""

    lower: np.ndarray
    upper: np.ndarray
    integer_mask: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        mask = np.asarray(self.integer_mask, dtype=bool)
        if not lo.shape == hi.shape == mask.shape or lo.ndim != 1:
            raise ValueError("lower, upper and integer_mask must be 1-d and the same length")
        if np.any(lo >= hi):
            raise ValueError("need lower < upper in every dimension")
        if np.any(np.ceil(lo[mask]) > np.floor(hi[mask])):
            raise ValueError("an integer dimension contains no integer")
        for name, v in (("lower", lo), ("upper", hi), ("integer_mask", mask)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def dim(self):
        return len(self.lower)

    @property
    def width(self):
        return self.upper - self.lower

    def repair(self, x):
        """Clamp into the box and snap masked dimensions to the nearest representable integer."""
        x = np.array(x, dtype=float)
        mid = (self.lower + self.upper) / 2.0
        bad = ~np.isfinite(x)
        if bad.any():
            x[bad] = np.broadcast_to(mid, x.shape)[bad]
        x = np.clip(x, self.lower, self.upper)
        m = self.integer_mask
        if m.any():
            x[..., m] = np.clip(np.round(x[..., m]), np.ceil(self.lower[m]), np.floor(self.upper[m]))
        return x

    def contains(self, x):
        x = np.asarray(x)
        inside = np.all((x >= self.lower) & (x <= self.upper), axis=-1)
        lattice = np.all(x[..., self.integer_mask] == np.round(x[..., self.integer_mask]), axis=-1)
        return inside & lattice


@dataclass(frozen=True)
class OptimizerConfig:
    population: int = 150
    iterations: int = 300
    seed: int = 0
    algorithm: str = "POA"
    algorithm_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if self.iterations < 1:
            raise ValueError("need at least one iteration")


@dataclass
class RunResult:
    best_position: np.ndarray
    best_fitness: float
    convergence: np.ndarray
    evaluations: int
    wall_time_s: float
    algorithm: str = ""
    seed: int = 0


@dataclass
class PopulationState:
    """Population plus the best-so-far record and per-algorithm ``memory``."""

    positions: np.ndarray
    fitness: np.ndarray
    best_position: np.ndarray
    best_fitness: float
    iterations: int
    memory: dict = field(default_factory=dict)

    def offer(self, positions, fitness):
        i = int(np.argmin(fitness))
        if fitness[i] < self.best_fitness:
            self.best_fitness = float(fitness[i])
            self.best_position = np.array(positions[i], dtype=float)

    def greedy(self, candidates, fitness):
        """Keep each candidate that beats its parent."""
        better = fitness < self.fitness
        self.positions[better] = candidates[better]
        self.fitness[better] = fitness[better]
        self.offer(candidates, fitness)


class Evaluator:
    """Repairs candidates, evaluates them row by row and counts calls.

    Non-finite objective values become +inf.
    """

    def __init__(self, objective, space: SearchSpace):
        self.objective = objective
        self.space = space
        self.count = 0
        self.non_finite = 0

    def __call__(self, candidates):
        x = self.space.repair(candidates)
        f = np.empty(len(x))
        for i, row in enumerate(x):
            v = float(self.objective(row))
            if not np.isfinite(v):
                self.non_finite += 1
                log.warning("objective returned %r at %s; treated as +inf", v, row.tolist())
                v = np.inf
            f[i] = v
        self.count += len(x)
        return x, f


def make_rng(seed):
    """Counter-based (Philox) generator for one run."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def init_population(space: SearchSpace, n, rng):
    if n < 2:
        raise ValueError("population must be at least 2")
    x = space.lower + rng.random((n, space.dim)) * space.width
    return space.repair(x)


def _registry():
    from . import ALGORITHMS
    return ALGORITHMS


def resolve_params(kind, params=None):
    registry = _registry()
    if kind not in registry:
        raise ValueError(f"unknown algorithm {kind!r}; choose from {sorted(registry)}")
    algo = registry[kind]
    params = dict(params or {})
    unknown = set(params) - set(algo.DEFAULTS)
    if unknown:
        raise ValueError(f"unknown parameters for {kind}: {sorted(unknown)}")
    return {**algo.DEFAULTS, **params}


def algorithm_step(kind, state: PopulationState, objective, space: SearchSpace, iteration, rng, params=None):
    """One generation of algorithm ``kind``; ``iteration`` counts from 1."""
    algos = _registry()
    if kind not in algos:
        raise ValueError(f"unknown algorithm {kind!r}; choose from {sorted(algos)}")
    evaluate = objective if isinstance(objective, Evaluator) else Evaluator(objective, space)
    p = resolve_params(kind, params)
    if not state.memory.get("_ready"):
        algos[kind].init(state, space, rng, p)
        state.memory["_ready"] = True
    algos[kind].step(state, evaluate, space, iteration, rng, p)
    return state


def minimize(objective, space: SearchSpace, config: OptimizerConfig):
    """Run one seeded optimisation; the result is a pure function of (objective, space, config)."""
    t0 = time.perf_counter()
    rng = make_rng(config.seed)
    params = resolve_params(config.algorithm, config.algorithm_params)
    evaluate = Evaluator(objective, space)
    x, f = evaluate(init_population(space, config.population, rng))
    i = int(np.argmin(f))
    state = PopulationState(positions=x, fitness=f, best_position=x[i].copy(),
                            best_fitness=float(f[i]), iterations=config.iterations)
    convergence = np.empty(config.iterations)
    for t in range(1, config.iterations + 1):
        algorithm_step(config.algorithm, state, evaluate, space, t, rng, params)
        convergence[t - 1] = state.best_fitness
    return RunResult(
        best_position=state.best_position,
        best_fitness=state.best_fitness,
        convergence=convergence,
        evaluations=evaluate.count,
        wall_time_s=time.perf_counter() - t0,
        algorithm=config.algorithm,
        seed=config.seed,
    )


def write_convergence_csv(result: RunResult, path):
    with open(path, "w") as fh:
        fh.write("iteration,best_fitness\n")
        for t, v in enumerate(result.convergence, start=1):
            fh.write(f"{t},{v:.6f}\n")
    return path
