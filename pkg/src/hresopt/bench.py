"""Repeated-run comparison of the optimizers and its table exports."""
import csv
import hashlib
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .economics import NeverProfitable, payback_period
from .optimize import ALGORITHMS, OptimizerConfig, minimize
from .problem import HRESProblem

log = logging.getLogger(__name__)

ALGORITHM_ORDER = ("PSO", "AO", "POA", "DOA", "GOA", "ZOA", "OOA")
PROFILES = {
    "desk": {"population": 50, "iterations": 100, "runs": 5},
    "paper": {"population": 150, "iterations": 300, "runs": 30},
}
DAYS_PER_YEAR = 365
DAYS_PER_MONTH = 30.42


@dataclass(frozen=True)
class BenchConfig:
    runs: int = 30
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    algorithms: tuple = ALGORITHM_ORDER
    master_seed: int = 0
    parallelism: int = 1
    scenario_label: str = "synthetic"
    algorithm_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("need at least one run")
        if not self.algorithms:
            raise ValueError("algorithm list is empty")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        object.__setattr__(self, "algorithms", tuple(self.algorithms))

    @classmethod
    def from_profile(cls, name, **overrides):
        if name not in PROFILES:
            raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")
        prof = PROFILES[name]
        base = overrides.pop("optimizer", OptimizerConfig())
        opt = replace(base, population=prof["population"], iterations=prof["iterations"])
        return cls(runs=prof["runs"], optimizer=opt, **overrides)

    def digest(self):
        body = {
            "runs": self.runs,
            "population": self.optimizer.population,
            "iterations": self.optimizer.iterations,
            "algorithm_params": self.algorithm_params,
            "algorithms": list(self.algorithms),
            "master_seed": self.master_seed,
            "scenario": self.scenario_label,
        }
        return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()[:16]


def run_seed(master_seed, algorithm_index, run):
    """Seed of one run, a fixed hash of (master seed, algorithm index, run index)."""
    state = np.random.SeedSequence([master_seed, algorithm_index, run]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


@dataclass
class RunRecord:
    algorithm: str
    run: int
    seed: int
    best_fitness: float = math.inf
    best_position: list = field(default_factory=list)
    evaluations: int = 0
    wall_time_s: float = 0.0
    error: str = ""
    convergence: np.ndarray | None = None

    @property
    def ok(self):
        return not self.error


@dataclass
class AlgorithmSummary:
    algorithm: str
    runs: list
    best_cost: float
    mean_cost: float
    std_cost: float
    best_position: list
    mean_convergence: list
    percent_difference: float | None = None
    percent_difference_exact: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def failures(self):
        return sum(not r.ok for r in self.runs)


@dataclass
class BenchReport:
    summaries: dict
    seeds: dict
    config_digest: str
    meta: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    @property
    def partial(self):
        return any(s.failures for s in self.summaries.values())

    def best_algorithm(self):
        return min(self.summaries.values(), key=lambda s: s.best_cost).algorithm

    def winners(self):
        """Algorithms whose best cost equals the overall minimum exactly."""
        return [a for a, s in self.summaries.items() if s.percent_difference_exact == 0.0]


def percent_difference(costs, decimals=2):
    """100*(c - min)/min per algorithm, rounded to ``decimals`` (None keeps full precision)."""
    if not costs:
        raise ValueError("no costs given")
    if any(c <= 0 for c in costs.values()):
        raise ValueError("costs must be positive")
    low = min(costs.values())
    out = {a: 100.0 * (c - low) / low for a, c in costs.items()}
    if decimals is None:
        return out
    return {a: round(v, decimals) for a, v in out.items()}


def format_duration(days):
    """Days as "Xyears Ymonths Zdays" with 365-day years and 30.42-day months."""
    if days < 0 or not math.isfinite(days):
        raise ValueError("duration must be a non-negative finite number of days")
    years = math.floor(days / DAYS_PER_YEAR)
    rest = days - years * DAYS_PER_YEAR
    months = math.floor(rest / DAYS_PER_MONTH)
    left = math.floor(rest - months * DAYS_PER_MONTH)
    unit = "day" if left == 1 else "days"
    return f"{years}years {months}months {left}{unit}"


def hres_details(problem: HRESProblem, position):
    """Sizing, reliability and payback of one position of an HRES problem."""
    info = problem.describe(position)
    d = info["design"]
    served_kwh = info["simulation"].energy_served_wh / 1000.0
    tariff = problem.econ.tariff_usd_per_kwh
    try:
        days = payback_period(info["cost"], served_kwh, tariff)
        text = format_duration(days)
    except NeverProfitable:
        days, text = None, "never"
    return {
        "n_wg": d.n_wg, "n_pv": d.n_pv, "n_bat": d.n_bat_parallel,
        "tilt_deg": d.tilt_deg, "hub_height_m": d.hub_height_m, "n_bio": d.n_bio,
        "cost_usd": info["cost"], "lpsp": info["lpsp"], "feasible": info["feasible"],
        "annual_energy_kwh": served_kwh, "payback_days": days, "payback": text,
    }


def _one_run(objective, space, opt: OptimizerConfig, algorithm, run, seed, params):
    rec = RunRecord(algorithm=algorithm, run=run, seed=seed)
    try:
        res = minimize(objective, space, replace(opt, algorithm=algorithm, seed=seed, algorithm_params=params))
    except Exception as exc:  # recorded per run, the bench carries on
        log.error("%s run %d failed: %s", algorithm, run, exc)
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    rec.best_fitness = res.best_fitness
    rec.best_position = [float(v) for v in res.best_position]
    rec.evaluations = res.evaluations
    rec.wall_time_s = res.wall_time_s
    rec.convergence = res.convergence
    return rec


def run_benchmark(cfg: BenchConfig, problem, space=None, details=None):
    """Run every (algorithm, run) pair and aggregate.

    ``problem`` is an :class:`HRESProblem`, a plain objective, or a mapping
    from algorithm to objective. ``details(position)`` adds per-algorithm
    extras for the best design; HRES problems supply sizing and payback.
    """
    t0 = time.perf_counter()
    if isinstance(problem, HRESProblem):
        space = space or problem.space
        details = details or (lambda x: hres_details(problem, x))
    if space is None:
        raise ValueError("a search space is required")
    objectives = problem if isinstance(problem, dict) else {a: problem for a in cfg.algorithms}

    tasks = []
    for a in cfg.algorithms:
        idx = ALGORITHM_ORDER.index(a)
        for r in range(cfg.runs):
            tasks.append((a, r, run_seed(cfg.master_seed, idx, r)))

    def work(task):
        a, r, seed = task
        return _one_run(objectives[a], space, cfg.optimizer, a, r, seed, cfg.algorithm_params.get(a, {}))

    if cfg.parallelism == 1:
        records = [work(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            records = list(pool.map(work, tasks))

    by_algo = {a: sorted((rec for rec in records if rec.algorithm == a), key=lambda rec: rec.run)
               for a in cfg.algorithms}
    summaries = {a: _summarise(a, recs, details) for a, recs in by_algo.items()}
    finite = {a: s.best_cost for a, s in summaries.items() if math.isfinite(s.best_cost)}
    if finite:
        exact = percent_difference(finite, decimals=None)
        for a, pct in percent_difference(finite).items():
            summaries[a].percent_difference = pct
            summaries[a].percent_difference_exact = exact[a]
    meta = {
        "runs": cfg.runs,
        "population": cfg.optimizer.population,
        "iterations": cfg.optimizer.iterations,
        "master_seed": cfg.master_seed,
        "algorithms": list(cfg.algorithms),
        "scenario": cfg.scenario_label,
    }
    return BenchReport(
        summaries=summaries,
        seeds={a: [rec.seed for rec in recs] for a, recs in by_algo.items()},
        config_digest=cfg.digest(),
        meta=meta,
        wall_time_s=time.perf_counter() - t0,
    )


def _summarise(algorithm, records, details):
    good = [r for r in records if r.ok]
    if not good:
        return AlgorithmSummary(algorithm, records, math.inf, math.inf, math.nan, [], [])
    fits = np.array([r.best_fitness for r in good])
    best = good[int(np.argmin(fits))]
    mean_conv = np.mean([r.convergence for r in good], axis=0)
    extra = details(np.array(best.best_position)) if details else {}
    return AlgorithmSummary(
        algorithm=algorithm,
        runs=records,
        best_cost=float(fits.min()),
        mean_cost=float(fits.mean()),
        std_cost=float(fits.std()),
        best_position=best.best_position,
        mean_convergence=[float(v) for v in mean_conv],
        details=extra,
    )


# export

def _num(v, fmt="{:.6f}"):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return fmt.format(v)


def _json_safe(v):
    if isinstance(v, dict):
        return {str(k): _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, (np.floating, float)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _write_csv(path, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


SIZING_KEYS = ("n_wg", "n_pv", "n_bat", "tilt_deg", "hub_height_m", "n_bio", "lpsp")


def export_report(report: BenchReport, out_dir, formats=("csv", "json")):
    """Write the table analogues and the mean convergence traces; returns the written paths."""
    if not report.summaries:
        raise ValueError("report has no algorithms; nothing to export")
    bad = set(formats) - {"csv", "json"}
    if bad:
        raise ValueError(f"unknown formats {sorted(bad)}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out}: {exc.strerror or exc}") from exc
    order = [a for a in ALGORITHM_ORDER if a in report.summaries]
    rows = [report.summaries[a] for a in order]
    written = []

    if "csv" in formats:
        path = out / "summary.csv"
        _write_csv(path, ("algorithm", "best_cost_usd", "mean_cost_usd", "std_cost_usd", "difference_pct",
                          "runs_ok", "runs_failed"),
                   [(s.algorithm, _num(s.best_cost), _num(s.mean_cost), _num(s.std_cost),
                     _num(s.percent_difference, "{:.2f}"), len(s.runs) - s.failures, s.failures)
                    for s in rows])
        written.append(path)

        path = out / "sizing.csv"
        _write_csv(path, ("algorithm", "best_cost_usd") + SIZING_KEYS,
                   [(s.algorithm, _num(s.best_cost)) + tuple(_num(s.details.get(k)) for k in SIZING_KEYS)
                    for s in rows])
        written.append(path)

        path = out / "profitability.csv"
        _write_csv(path, ("algorithm", "best_cost_usd", "annual_energy_kwh", "payback_days", "payback"),
                   [(s.algorithm, _num(s.best_cost), _num(s.details.get("annual_energy_kwh")),
                     _num(s.details.get("payback_days"), "{:.2f}"), s.details.get("payback", ""))
                    for s in rows])
        written.append(path)

        path = out / "convergence.csv"
        n_iter = max(len(s.mean_convergence) for s in rows)
        conv_rows = []
        for t in range(n_iter):
            conv_rows.append([t + 1] + [_num(s.mean_convergence[t]) if t < len(s.mean_convergence) else ""
                                        for s in rows])
        _write_csv(path, ["iteration"] + order, conv_rows)
        written.append(path)

        path = out / "runs.csv"
        _write_csv(path, ("algorithm", "run", "seed", "best_fitness", "evaluations", "error"),
                   [(r.algorithm, r.run, r.seed, _num(r.best_fitness), r.evaluations, r.error)
                    for s in rows for r in s.runs])
        written.append(path)

    if "json" in formats:
        path = out / "report.json"
        path.write_text(json.dumps(_json_safe(report_to_dict(report)), sort_keys=True, indent=2) + "\n")
        written.append(path)
        path = out / "timing.json"
        timing = {"total_s": report.wall_time_s,
                  "runs": {a: [r.wall_time_s for r in report.summaries[a].runs] for a in order}}
        path.write_text(json.dumps(_json_safe(timing), sort_keys=True, indent=2) + "\n")
        written.append(path)
    return written


def report_to_dict(report: BenchReport):
    """Everything but wall times."""
    algos = {}
    for a, s in report.summaries.items():
        algos[a] = {
            "best_cost": s.best_cost,
            "mean_cost": s.mean_cost,
            "std_cost": s.std_cost,
            "percent_difference": s.percent_difference,
            "percent_difference_exact": s.percent_difference_exact,
            "best_position": s.best_position,
            "mean_convergence": s.mean_convergence,
            "details": s.details,
            "runs": [{k: v for k, v in asdict(r).items() if k not in ("wall_time_s", "convergence")}
                     for r in s.runs],
        }
    return {
        "algorithms": algos,
        "seeds": report.seeds,
        "config_digest": report.config_digest,
        "meta": report.meta,
        "partial": report.partial,
    }


def load_report(path):
    """Rebuild a report from ``report.json`` (and ``timing.json`` alongside, if present)."""
    path = Path(path)
    if path.is_dir():
        path = path / "report.json"
    data = json.loads(path.read_text())

    def num(v):
        return math.inf if v is None else v

    timing_path = path.with_name("timing.json")
    timing = json.loads(timing_path.read_text()) if timing_path.exists() else {}
    summaries = {}
    for a, s in data["algorithms"].items():
        times = timing.get("runs", {}).get(a, [])
        runs = []
        for i, r in enumerate(s["runs"]):
            r = dict(r, best_fitness=num(r["best_fitness"]))
            runs.append(RunRecord(**r, wall_time_s=times[i] if i < len(times) else 0.0))
        summaries[a] = AlgorithmSummary(
            algorithm=a, runs=runs, best_cost=num(s["best_cost"]), mean_cost=num(s["mean_cost"]),
            std_cost=s["std_cost"] if s["std_cost"] is not None else math.nan,
            best_position=s["best_position"], mean_convergence=[num(v) for v in s["mean_convergence"]],
            percent_difference=s["percent_difference"],
            percent_difference_exact=s.get("percent_difference_exact"), details=s["details"],
        )
    return BenchReport(summaries=summaries, seeds=data["seeds"], config_digest=data["config_digest"],
                       meta=data["meta"], wall_time_s=timing.get("total_s", 0.0))
