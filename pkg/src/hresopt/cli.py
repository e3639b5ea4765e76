"""Command-line entry point: gen-data, simulate, optimize, bench, report."""
import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

from . import bench as bench_mod
from .config import load_config
from .dispatch import DesignVector, simulate_year, write_trace_csv
from .economics import fitness, system_cost
from .optimize import minimize, write_convergence_csv
from .problem import HRESProblem
from .timeseries import read_scenario_csv, synth_scenario, write_scenario_csv

log = logging.getLogger("hresopt")


class Parser(argparse.ArgumentParser):
    """Usage errors as one parsable line."""

    def error(self, message):
        sys.stderr.write(f"error: UsageError: {message}\n")
        sys.exit(2)


def _algorithms(text):
    return tuple(a.strip() for a in text.split(",") if a.strip())


parent_parser = Parser(add_help=False)
parent_parser.add_argument("--config", type=Path, help="INI file layered over the built-in defaults")
parent_parser.add_argument("--seed", type=int, help="master/optimizer seed (scenario seed for gen-data)")
parent_parser.add_argument("--out-dir", type=Path, default=Path("out"), help="output directory (default: out)")
parent_parser.add_argument("--profile", choices=("desk", "paper", "custom"), help="bench scale")
parent_parser.add_argument("--algorithms", type=_algorithms, help="comma-separated algorithm tags")
parent_parser.add_argument("--trace", action="store_true", help="write hourly simulation traces")
parent_parser.add_argument("-v", "--verbose", action="store_true")


def _scenario(cfg, path=None):
    path = path or cfg.scenario.csv
    if path:
        return read_scenario_csv(path, site=cfg.site)
    return synth_scenario(cfg.site, cfg.synthesis, cfg.scenario.seed)


def _design(text):
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("need six values: n_pv,n_wg,n_bat,tilt,h,n_bio")
    return parts


def _emit(obj):
    sys.stdout.write(json.dumps(bench_mod._json_safe(obj), sort_keys=True, indent=2) + "\n")


def cmd_gen_data(args, cfg):
    seed = cfg.scenario.seed if args.seed is None else args.seed
    scenario = synth_scenario(cfg.site, cfg.synthesis, seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    path = args.output or args.out_dir / "scenario.csv"
    write_scenario_csv(scenario, path)
    _emit({"scenario": str(path), "seed": seed, "mean_load_w": float(scenario.load.values.mean())})


def cmd_simulate(args, cfg):
    scenario = _scenario(cfg, args.scenario)
    n_pv, n_wg, n_bat, tilt, h, n_bio = args.design
    design = DesignVector(int(n_pv), int(n_wg), int(n_bat), tilt, h, int(n_bio))
    res = simulate_year(design, scenario, cfg.catalog, trace=args.trace)
    out = {
        "design": asdict(design),
        "lpsp": res.lpsp,
        "total_demand_wh": res.total_demand_wh,
        "total_unmet_wh": res.total_unmet_wh,
        "total_surplus_wh": res.total_surplus_wh,
        "energy_served_wh": res.energy_served_wh,
        "generation_by_source_wh": res.generation_by_source_wh,
        "final_soc": res.final_soc,
        "cost_usd": system_cost(design, cfg.catalog, cfg.econ),
        "fitness": fitness(design, scenario, cfg.catalog, cfg.econ, cfg.fitness),
    }
    if args.trace:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        out["trace"] = str(write_trace_csv(res, args.out_dir / "trace.csv"))
    _emit(out)


def cmd_optimize(args, cfg):
    scenario = _scenario(cfg, args.scenario)
    problem = HRESProblem(scenario, cfg.catalog, cfg.econ, cfg.fitness, space=cfg.search)
    algo = args.algorithm or (args.algorithms[0] if args.algorithms else None)
    opt = cfg.optimizer_config(algorithm=algo, seed=args.seed)
    if args.profile in bench_mod.PROFILES:
        p = bench_mod.PROFILES[args.profile]
        opt = replace(opt, population=p["population"], iterations=p["iterations"])
    res = minimize(problem, problem.space, opt)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    conv = write_convergence_csv(res, args.out_dir / f"convergence_{opt.algorithm}.csv")
    details = bench_mod.hres_details(problem, res.best_position)
    out = {"algorithm": opt.algorithm, "seed": opt.seed, "best_fitness": res.best_fitness,
           "evaluations": res.evaluations, "design": details, "convergence": str(conv)}
    if args.trace:
        sim = simulate_year(problem.design(res.best_position), scenario, cfg.catalog, trace=True)
        out["trace"] = str(write_trace_csv(sim, args.out_dir / f"trace_{opt.algorithm}.csv"))
    _emit(out)


def cmd_bench(args, cfg):
    scenario = _scenario(cfg, args.scenario)
    problem = HRESProblem(scenario, cfg.catalog, cfg.econ, cfg.fitness, space=cfg.search)
    bcfg = cfg.bench_config(profile=args.profile, algorithms=args.algorithms, master_seed=args.seed,
                            parallelism=args.parallelism)
    report = bench_mod.run_benchmark(bcfg, problem)
    files = bench_mod.export_report(report, args.out_dir)
    if args.trace:
        for a, s in report.summaries.items():
            if s.best_position:
                sim = simulate_year(problem.design(s.best_position), scenario, cfg.catalog, trace=True)
                files.append(write_trace_csv(sim, args.out_dir / f"trace_{a}.csv"))
    _emit({
        "best_algorithm": report.best_algorithm(),
        "partial": report.partial,
        "difference_pct": {a: s.percent_difference for a, s in report.summaries.items()},
        "files": [str(f) for f in files],
    })


def cmd_report(args, cfg):
    report = bench_mod.load_report(args.source)
    files = bench_mod.export_report(report, args.out_dir)
    _emit({"best_algorithm": report.best_algorithm(), "files": [str(f) for f in files]})


def build_parser():
    parser = Parser(prog="hresopt", description="Hybrid renewable system sizing with metaheuristics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", parents=[parent_parser], help="synthesize a scenario CSV")
    p.add_argument("--output", type=Path, help="CSV path (default: <out-dir>/scenario.csv)")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("simulate", parents=[parent_parser], help="simulate one design over the year")
    p.add_argument("--design", type=_design, required=True, metavar="N_PV,N_WG,N_BAT,TILT,H,N_BIO")
    p.add_argument("--scenario", type=Path, help="scenario CSV (default: synthetic)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", parents=[parent_parser], help="one optimizer run")
    p.add_argument("--algorithm", help="algorithm tag (default from config)")
    p.add_argument("--scenario", type=Path)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("bench", parents=[parent_parser], help="repeated runs of every algorithm")
    p.add_argument("--scenario", type=Path)
    p.add_argument("--parallelism", type=int, help="worker threads")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", parents=[parent_parser], help="re-export tables from a report.json")
    p.add_argument("--from", dest="source", type=Path, required=True, help="report.json or its directory")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        args.func(args, cfg)
    except Exception as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"error: {type(exc).__name__}: {msg}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
