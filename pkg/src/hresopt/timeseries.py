"""Hourly site-year data: ingestion, synthesis and validation.

Hour 0 is January 1, 00:00 local solar time. A year is always 8760 hours;
day-of-year for hour ``t`` is ``1 + t // 24``.
"""
import csv
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtr

from . import solar

HOURS = 8760

UNITS = {
    "W": True,
    "W/m²": True,
    "°C": False,
    "m/s": True,
    "kg": True,
}
_UNIT_ALIASES = {"W/m2": "W/m²", "C": "°C", "degC": "°C", "ms": "m/s"}

SCENARIO_COLUMNS = ("hour", "ghi_w_m2", "diffuse_w_m2", "temp_c", "wind_ms", "load_w", "foodwaste_kg")
_SERIES_COLUMNS = {
    "ghi": ("ghi_w_m2", "W/m²"),
    "diffuse": ("diffuse_w_m2", "W/m²"),
    "ambient_temp": ("temp_c", "°C"),
    "wind_speed_ref": ("wind_ms", "m/s"),
    "load": ("load_w", "W"),
    "food_waste": ("foodwaste_kg", "kg"),
}

# Campus-like weekday shape (W); a stand-in, not measured data.
DEFAULT_DAILY_PROFILE = (
    3200, 3000, 2900, 2900, 3000, 3400, 4300, 5600, 7400, 9000, 10200, 10800,
    10500, 10600, 10700, 10300, 9400, 8300, 7800, 7600, 7000, 5900, 4600, 3700,
)


class ScenarioError(ValueError):
    """Bad scenario input; ``row`` is the 1-based data row when known."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


def _norm_unit(unit):
    unit = _UNIT_ALIASES.get(unit, unit)
    if unit not in UNITS:
        raise ValueError(f"unknown unit {unit!r}; expected one of {sorted(UNITS)}")
    return unit


@dataclass(frozen=True)
class HourlySeries:
    values: np.ndarray
    unit: str

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "unit", _norm_unit(self.unit))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Violation:
    series: str
    hour: int | None
    rule: str

    def __str__(self):
        where = f" at hour {self.hour}" if self.hour is not None else ""
        return f"{self.series}{where}: {self.rule}"


def series_violations(series: HourlySeries, name="series"):
    """Invariant violations of one series (length, finiteness, sign)."""
    out = []
    v = series.values
    if v.ndim != 1 or len(v) != HOURS:
        out.append(Violation(name, None, f"length {v.size} ≠ {HOURS}"))
        return out
    bad = np.flatnonzero(~np.isfinite(v))
    out.extend(Violation(name, int(t), "value not finite") for t in bad)
    if UNITS[series.unit]:
        neg = np.flatnonzero(np.isfinite(v) & (v < 0))
        out.extend(Violation(name, int(t), f"negative value under unit {series.unit}") for t in neg)
    return out


def checked(values, unit, name="series"):
    s = HourlySeries(values, unit)
    problems = series_violations(s, name)
    if problems:
        raise ScenarioError(str(problems[0]), row=problems[0].hour)
    return s


@dataclass(frozen=True)
class SiteConfig:
    latitude_deg: float = 23.95
    ground_reflectance: float = 0.2
    reference_height_m: float = 33.0
    power_law_alpha: float = 0.15
    bus_voltage_v: float = 24.0

    def __post_init__(self):
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise ValueError(f"latitude {self.latitude_deg} outside [-90, 90]")
        if not 0.0 <= self.ground_reflectance <= 1.0:
            raise ValueError(f"ground reflectance {self.ground_reflectance} outside [0, 1]")
        for name in ("reference_height_m", "power_law_alpha", "bus_voltage_v"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ScenarioData:
    ghi: HourlySeries
    diffuse: HourlySeries
    ambient_temp: HourlySeries
    wind_speed_ref: HourlySeries
    load: HourlySeries
    food_waste: HourlySeries
    site: SiteConfig = field(default_factory=SiteConfig)

    def series(self):
        return {name: getattr(self, name) for name in _SERIES_COLUMNS}


def validate_scenario(s: ScenarioData):
    """All invariant violations of ``s``; empty iff the scenario is valid."""
    out = []
    for name, series in s.series().items():
        out.extend(series_violations(series, name))
    g, d = s.ghi.values, s.diffuse.values
    if len(g) == HOURS and len(d) == HOURS:
        for t in np.flatnonzero(d > g):
            out.append(Violation("diffuse", int(t), "diffuse exceeds ghi"))
    return out


def load_series_csv(path, expected_unit, column=None):
    """Read one hourly series from a CSV file.

    The file holds one value per row, optionally preceded by a header. With
    several columns, ``column`` names the one to read (a header is then
    required). Row numbers in errors are 1-based data rows.
    """
    unit = _norm_unit(expected_unit)
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"missing file: {path}")
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    idx = 0
    if rows and not _is_number(rows[0][0 if column is None else 0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if column is not None:
            if column not in header:
                raise ScenarioError(f"column {column!r} not in header {header}")
            idx = header.index(column)
    elif column is not None:
        raise ScenarioError(f"column {column!r} requested but file has no header")
    if len(rows) != HOURS:
        raise ScenarioError(f"row count {len(rows)} ≠ {HOURS}")
    values = np.empty(HOURS)
    for i, row in enumerate(rows):
        values[i] = _parse_cell(row[idx] if idx < len(row) else "", i + 1)
        if UNITS[unit] and values[i] < 0:
            raise ScenarioError(f"row {i + 1}: negative value {values[i]} under unit {unit}", row=i + 1)
    return HourlySeries(values, unit)


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_cell(text, row):
    try:
        x = float(text)
    except ValueError:
        raise ScenarioError(f"row {row}: non-numeric cell {text!r}", row=row) from None
    if not np.isfinite(x):
        raise ScenarioError(f"row {row}: non-finite cell {text!r}", row=row)
    return x


def read_scenario_csv(path, site=None):
    """Load a scenario file written by :func:`write_scenario_csv`."""
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"missing file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = [c.strip() for c in next(reader, [])]
        if tuple(header) != SCENARIO_COLUMNS:
            raise ScenarioError(f"header {header} does not match {list(SCENARIO_COLUMNS)}")
        rows = [r for r in reader if r]
    if len(rows) != HOURS:
        raise ScenarioError(f"row count {len(rows)} ≠ {HOURS}")
    table = np.empty((HOURS, len(SCENARIO_COLUMNS)))
    for i, row in enumerate(rows):
        if len(row) != len(SCENARIO_COLUMNS):
            raise ScenarioError(f"row {i + 1}: expected {len(SCENARIO_COLUMNS)} cells, got {len(row)}", row=i + 1)
        table[i] = [_parse_cell(c, i + 1) for c in row]
        if int(table[i, 0]) != i:
            raise ScenarioError(f"row {i + 1}: hour {row[0]} out of order", row=i + 1)
    kw = {}
    for name, (col, unit) in _SERIES_COLUMNS.items():
        kw[name] = HourlySeries(table[:, SCENARIO_COLUMNS.index(col)], unit)
    s = ScenarioData(site=site or SiteConfig(), **kw)
    problems = validate_scenario(s)
    if problems:
        p = problems[0]
        raise ScenarioError(str(p), row=None if p.hour is None else p.hour + 1)
    return s


def write_scenario_csv(s: ScenarioData, path):
    path = Path(path)
    cols = [s.series()[name].values for name in _SERIES_COLUMNS]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCENARIO_COLUMNS)
        for t in range(HOURS):
            w.writerow([t] + [f"{c[t]:.6f}" for c in cols])
    return path


def synth_load(daily_profile, noise_fraction, seed):
    """Hourly load drawn from N(profile[t % 24], noise_fraction * profile), clamped at 0."""
    profile = np.asarray(daily_profile, dtype=float)
    if profile.shape != (24,):
        raise ValueError("daily profile must have 24 entries")
    if np.any(profile < 0):
        raise ValueError("daily profile entries must be non-negative")
    if not 0.0 <= noise_fraction < 1.0:
        raise ValueError(f"noise fraction {noise_fraction} outside [0, 1)")
    rng = np.random.default_rng(seed)
    mu = np.tile(profile, HOURS // 24)
    values = np.maximum(rng.normal(mu, noise_fraction * mu), 0.0)
    return checked(values, "W", "load")


@dataclass(frozen=True)
class SynthesisParams:
    """Knobs of the synthetic site-year. All noise terms at 0 give periodic series."""

    clear_sky_peak_wm2: float = 1000.0
    cloud_variability: float = 0.45
    weibull_shape: float = 2.0
    weibull_scale_ms: float = 5.5
    wind_noise: float = 1.0
    wind_autocorrelation: float = 0.9
    temp_mean_c: float = 26.0
    temp_annual_amplitude_c: float = 5.0
    temp_daily_amplitude_c: float = 4.0
    temp_noise_c: float = 1.0
    load_profile_w: tuple = DEFAULT_DAILY_PROFILE
    load_noise_fraction: float = 0.1
    waste_per_day_kg: float = 300.0
    waste_noise_fraction: float = 0.2

    def __post_init__(self):
        if self.clear_sky_peak_wm2 < 0:
            raise ValueError("clear-sky peak irradiance must be non-negative")
        if self.weibull_scale_ms <= 0 or self.weibull_shape <= 0:
            raise ValueError("Weibull shape and scale must be positive")
        if not 0.0 <= self.cloud_variability <= 1.0:
            raise ValueError("cloud variability must be in [0, 1]")
        if not 0.0 <= self.wind_noise <= 1.0:
            raise ValueError("wind noise must be in [0, 1]")
        if not 0.0 <= self.wind_autocorrelation < 1.0:
            raise ValueError("wind autocorrelation must be in [0, 1)")
        if self.waste_per_day_kg < 0:
            raise ValueError("waste per day must be non-negative")
        if not 0.0 <= self.waste_noise_fraction < 1.0:
            raise ValueError("waste noise fraction must be in [0, 1)")
        object.__setattr__(self, "load_profile_w", tuple(float(x) for x in self.load_profile_w))

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def hour_geometry(latitude_deg):
    """Day-of-year, declination and mid-hour hour angle for every hour."""
    t = np.arange(HOURS)
    n = 1 + t // 24
    dec = solar.declination(n)
    ome = solar.hour_angle(t % 24 + 0.5)
    return n, dec, ome


def synth_scenario(site: SiteConfig, params: SynthesisParams, seed):
    """A seeded synthetic site-year.

    Irradiance is a clear-sky bell (``peak * cos zenith``) scaled by a daily
    sky factor; diffuse comes from the clearness-index correlation. Wind is
    Weibull with AR(1) Gaussian-copula persistence. Each quantity draws from
    its own child stream of ``seed``.
    """
    p = params
    streams = np.random.SeedSequence(seed).spawn(5)
    rng_sky, rng_wind, rng_temp, rng_waste = (np.random.default_rng(s) for s in streams[:4])
    n, dec, ome = hour_geometry(site.latitude_deg)
    days = HOURS // 24

    cz = np.maximum(solar.cos_zenith(site.latitude_deg, dec, ome), 0.0)
    sky = 1.0 - p.cloud_variability * rng_sky.beta(1.2, 2.0, size=days)
    ghi = p.clear_sky_peak_wm2 * cz * np.repeat(sky, 24)
    g0 = solar.SOLAR_CONSTANT * solar.eccentricity_factor(n) * cz
    kt = solar.clearness_index(ghi, n, site.latitude_deg, ome)
    diffuse = np.where(g0 > 0, solar.diffuse_fraction(kt) * ghi, 0.0)
    diffuse = np.minimum(diffuse, ghi)

    z = lfilter([np.sqrt(1.0 - p.wind_autocorrelation**2)], [1.0, -p.wind_autocorrelation],
                rng_wind.standard_normal(HOURS))
    q = 0.5 + p.wind_noise * (ndtr(z) - 0.5)
    q = np.clip(q, 1e-12, 1.0 - 1e-12)
    wind = p.weibull_scale_ms * (-np.log1p(-q)) ** (1.0 / p.weibull_shape)

    hour = np.arange(HOURS) % 24
    temp = (p.temp_mean_c
            - p.temp_annual_amplitude_c * np.cos(2 * np.pi * (n - 15) / 365.0)
            + p.temp_daily_amplitude_c * np.cos(2 * np.pi * (hour - 15) / 24.0)
            + p.temp_noise_c * rng_temp.standard_normal(HOURS))

    load = synth_load(p.load_profile_w, p.load_noise_fraction, streams[4])
    per_hour = p.waste_per_day_kg / 24.0
    waste = np.maximum(rng_waste.normal(per_hour, p.waste_noise_fraction * per_hour, HOURS), 0.0)

    s = ScenarioData(
        ghi=HourlySeries(ghi, "W/m²"),
        diffuse=HourlySeries(diffuse, "W/m²"),
        ambient_temp=HourlySeries(temp, "°C"),
        wind_speed_ref=HourlySeries(wind, "m/s"),
        load=load,
        food_waste=HourlySeries(waste, "kg"),
        site=site,
    )
    problems = validate_scenario(s)
    if problems:  # pragma: no cover - construction guarantees validity
        raise ScenarioError(str(problems[0]))
    return s
