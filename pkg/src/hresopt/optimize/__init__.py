from . import aquila, dandelion, gazelle, osprey, pelican, pso, zebra
from .core import (
    Evaluator,
    OptimizerConfig,
    PopulationState,
    RunResult,
    SearchSpace,
    algorithm_step,
    init_population,
    make_rng,
    minimize,
    resolve_params,
    write_convergence_csv,
)

ALGORITHMS = {
    "PSO": pso,
    "AO": aquila,
    "POA": pelican,
    "DOA": dandelion,
    "GOA": gazelle,
    "ZOA": zebra,
    "OOA": osprey,
}

__all__ = [
    "ALGORITHMS", "Evaluator", "OptimizerConfig", "PopulationState", "RunResult", "SearchSpace",
    "algorithm_step", "init_population", "make_rng", "minimize", "resolve_params",
    "write_convergence_csv",
]
