"""INI configuration: one section per settings object, every default a key."""
import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .bench import ALGORITHM_ORDER, PROFILES, BenchConfig
from .components import BatterySpec, BiogasSpec, ComponentCatalog, PVModuleSpec, WindTurbineSpec
from .economics import EconConfig, FitnessConfig
from .optimize import ALGORITHMS, OptimizerConfig, SearchSpace
from .problem import DEFAULT_LOWER, DEFAULT_UPPER, INTEGER_MASK
from .timeseries import SiteConfig, SynthesisParams

CATALOG_PARTS = {"wind": WindTurbineSpec, "pv": PVModuleSpec, "biogas": BiogasSpec, "battery": BatterySpec}
CATALOG_SWITCHES = ("transposition", "voc_convention", "initial_soc")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioSource:
    seed: int = 2024
    csv: str = ""


@dataclass(frozen=True)
class AppConfig:
    site: SiteConfig = field(default_factory=SiteConfig)
    synthesis: SynthesisParams = field(default_factory=SynthesisParams)
    scenario: ScenarioSource = field(default_factory=ScenarioSource)
    catalog: ComponentCatalog = field(default_factory=ComponentCatalog)
    econ: EconConfig = field(default_factory=EconConfig)
    fitness: FitnessConfig = field(default_factory=FitnessConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    algorithm_params: dict = field(default_factory=dict)
    search: SearchSpace = field(default_factory=lambda: SearchSpace(DEFAULT_LOWER, DEFAULT_UPPER, INTEGER_MASK))
    bench_runs: int = 30
    bench_profile: str = "desk"
    bench_parallelism: int = 1
    bench_algorithms: tuple = ALGORITHM_ORDER

    def bench_config(self, profile=None, algorithms=None, master_seed=None, parallelism=None):
        profile = profile or self.bench_profile
        algos = tuple(algorithms or self.bench_algorithms)
        common = dict(
            algorithms=algos,
            master_seed=self.optimizer.seed if master_seed is None else master_seed,
            parallelism=parallelism or self.bench_parallelism,
            scenario_label=self.scenario.csv or f"synthetic:{self.scenario.seed}",
            algorithm_params={a: self.algorithm_params.get(a, {}) for a in algos},
        )
        if profile == "custom":
            return BenchConfig(runs=self.bench_runs, optimizer=self.optimizer, **common)
        return BenchConfig.from_profile(profile, optimizer=self.optimizer, **common)

    def optimizer_config(self, algorithm=None, seed=None):
        algo = algorithm or self.optimizer.algorithm
        return replace(self.optimizer, algorithm=algo,
                       seed=self.optimizer.seed if seed is None else seed,
                       algorithm_params=self.algorithm_params.get(algo, {}))


def _fmt(v):
    if v is None:
        return "auto"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list)):
        return ", ".join(_fmt(x) for x in v)
    if isinstance(v, float) and v.is_integer():
        return repr(v)
    return str(v)


def _parse(text, default, key):
    t = text.strip()
    try:
        if isinstance(default, bool):
            if t.lower() in ("1", "true", "yes", "on"):
                return True
            if t.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(t)
        if default is None:
            if t.lower() in ("", "auto", "none"):
                return None
            return int(t) if t.lstrip("-").isdigit() else float(t)
        if isinstance(default, int):
            return int(t)
        if isinstance(default, float):
            return float(t)
        if isinstance(default, tuple):
            items = [x.strip() for x in t.split(",") if x.strip()]
            if default and isinstance(default[0], str):
                return tuple(items)
            return tuple(float(x) for x in items)
        return t
    except ValueError:
        raise ConfigError(f"bad value {text!r} for {key}") from None


def _apply(obj, items, section, known=None):
    """Copy of dataclass ``obj`` with ``items`` parsed against the field defaults."""
    names = {f.name for f in fields(obj)}
    updates = {}
    for key, text in items.items():
        if key not in names:
            if known and key in known:
                continue
            raise ConfigError(f"unknown key {key!r} in [{section}]")
        updates[key] = _parse(text, getattr(obj, key), f"{section}.{key}")
    try:
        return replace(obj, **updates)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}]: {exc}") from None


def load_config(path=None):
    """Parse an INI file on top of the built-in defaults (None gives the defaults)."""
    cfg = AppConfig()
    if path is None:
        return cfg
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None

    known_sections = {"site", "synthesis", "scenario", "catalog", "econ", "fitness", "optimizer", "search", "bench"}
    extra = set(parser.sections()) - known_sections
    if extra:
        raise ConfigError(f"unknown sections {sorted(extra)}")
    sec = {s: dict(parser[s]) for s in parser.sections()}

    site = _apply(cfg.site, sec.get("site", {}), "site")
    synthesis = _apply(cfg.synthesis, sec.get("synthesis", {}), "synthesis")
    scenario = _apply(cfg.scenario, sec.get("scenario", {}), "scenario")

    parts = {}
    switches = {}
    for key, text in sec.get("catalog", {}).items():
        part, _, name = key.partition(".")
        if name and part in CATALOG_PARTS:
            parts.setdefault(part, {})[name] = text
        elif key in CATALOG_SWITCHES:
            switches[key] = text
        else:
            raise ConfigError(f"unknown key {key!r} in [catalog]")
    specs = {p: _apply(getattr(cfg.catalog, p), parts.get(p, {}), f"catalog.{p}") for p in CATALOG_PARTS}
    catalog = _apply(replace(cfg.catalog, **specs), switches, "catalog")

    econ = _apply(cfg.econ, sec.get("econ", {}), "econ")
    fitness = _apply(cfg.fitness, sec.get("fitness", {}), "fitness")

    opt_items, algo_params = {}, {}
    for key, text in sec.get("optimizer", {}).items():
        algo, dot, name = key.partition(".")
        if dot:
            if algo not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {algo!r} in [optimizer]")
            defaults = ALGORITHMS[algo].DEFAULTS
            if name not in defaults:
                raise ConfigError(f"unknown parameter {name!r} for {algo}")
            algo_params.setdefault(algo, {})[name] = _parse(text, defaults[name], key)
        else:
            opt_items[key] = text
    opt_items.pop("algorithm_params", None)
    optimizer = _apply(cfg.optimizer, opt_items, "optimizer")
    if optimizer.algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {optimizer.algorithm!r}")

    s = sec.get("search", {})
    unknown = set(s) - {"lower", "upper"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in [search]")
    lower = _parse(s.get("lower", _fmt(DEFAULT_LOWER)), (0.0,), "search.lower")
    upper = _parse(s.get("upper", _fmt(DEFAULT_UPPER)), (0.0,), "search.upper")
    if len(lower) != 6 or len(upper) != 6:
        raise ConfigError("search bounds need six values: n_pv, n_wg, n_bat, tilt, h, n_bio")
    try:
        search = SearchSpace(lower, upper, INTEGER_MASK)
    except ValueError as exc:
        raise ConfigError(f"[search]: {exc}") from None

    b = sec.get("bench", {})
    unknown = set(b) - {"runs", "profile", "parallelism", "algorithms"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in [bench]")
    profile = b.get("profile", cfg.bench_profile).strip()
    if profile not in PROFILES and profile != "custom":
        raise ConfigError(f"unknown bench profile {profile!r}")
    algos = _parse(b.get("algorithms", _fmt(cfg.bench_algorithms)), ("",), "bench.algorithms")
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise ConfigError(f"bad algorithm list {list(algos)}")

    return AppConfig(
        site=site, synthesis=synthesis, scenario=scenario, catalog=catalog, econ=econ, fitness=fitness,
        optimizer=optimizer, algorithm_params=algo_params, search=search,
        bench_runs=_parse(b.get("runs", str(cfg.bench_runs)), 0, "bench.runs"),
        bench_profile=profile,
        bench_parallelism=_parse(b.get("parallelism", str(cfg.bench_parallelism)), 0, "bench.parallelism"),
        bench_algorithms=algos,
    )


def default_config_text():
    """The built-in defaults rendered as an INI file."""
    cfg = AppConfig()
    lines = []

    def section(name, pairs):
        lines.append(f"[{name}]")
        lines.extend(f"{k} = {_fmt(v)}" for k, v in pairs)
        lines.append("")

    section("site", [(f.name, getattr(cfg.site, f.name)) for f in fields(cfg.site)])
    section("synthesis", [(f.name, getattr(cfg.synthesis, f.name)) for f in fields(cfg.synthesis)])
    section("scenario", [(f.name, getattr(cfg.scenario, f.name)) for f in fields(cfg.scenario)])
    cat = []
    for part in CATALOG_PARTS:
        spec = getattr(cfg.catalog, part)
        cat.extend((f"{part}.{f.name}", getattr(spec, f.name)) for f in fields(spec))
    cat.extend((k, getattr(cfg.catalog, k)) for k in CATALOG_SWITCHES)
    section("catalog", cat)
    section("econ", [(f.name, getattr(cfg.econ, f.name)) for f in fields(cfg.econ)])
    section("fitness", [(f.name, getattr(cfg.fitness, f.name)) for f in fields(cfg.fitness)])
    opt = [(k, getattr(cfg.optimizer, k)) for k in ("population", "iterations", "seed", "algorithm")]
    for algo in ALGORITHM_ORDER:
        opt.extend((f"{algo}.{k}", v) for k, v in ALGORITHMS[algo].DEFAULTS.items())
    section("optimizer", opt)
    section("search", [("lower", DEFAULT_LOWER), ("upper", DEFAULT_UPPER)])
    section("bench", [("runs", cfg.bench_runs), ("profile", cfg.bench_profile),
                      ("parallelism", cfg.bench_parallelism), ("algorithms", cfg.bench_algorithms)])
    return "\n".join(lines)


def write_default_config(path):
    Path(path).write_text(default_config_text())
    return path
