import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from hresopt.timeseries import (
    HOURS,
    HourlySeries,
    ScenarioData,
    ScenarioError,
    SiteConfig,
    SynthesisParams,
    load_series_csv,
    read_scenario_csv,
    synth_load,
    synth_scenario,
    validate_scenario,
    write_scenario_csv,
)

# mean of v³ for seed 1 with default synthesis parameters, pinned on first run
WIND_CUBE_MEAN_SEED1 = 211.43102649343697


def write_column(path, values, header="value"):
    with open(path, "w") as fh:
        if header:
            fh.write(header + "\n")
        for v in values:
            fh.write(f"{v}\n")
    return path


def test_load_zeros(tmp_path):
    s = load_series_csv(write_column(tmp_path / "z.csv", [0] * HOURS), "W")
    assert s.unit == "W"
    assert_array_equal(s.values, np.zeros(HOURS))


def test_load_without_header(tmp_path):
    s = load_series_csv(write_column(tmp_path / "z.csv", range(HOURS), header=None), "kg")
    assert s.values[-1] == HOURS - 1


def test_load_row_count(tmp_path):
    with pytest.raises(ScenarioError, match="row count 8759 ≠ 8760"):
        load_series_csv(write_column(tmp_path / "short.csv", [1] * (HOURS - 1)), "W")


def test_load_nan_names_row(tmp_path):
    vals = [1.0] * HOURS
    vals[99] = "NaN"
    with pytest.raises(ScenarioError, match="row 100") as err:
        load_series_csv(write_column(tmp_path / "nan.csv", vals), "W")
    assert err.value.row == 100


def test_load_non_numeric_and_negative(tmp_path):
    vals = [1.0] * HOURS
    vals[4] = "abc"
    with pytest.raises(ScenarioError, match="row 5"):
        load_series_csv(write_column(tmp_path / "a.csv", vals), "W")
    vals[4] = -2
    with pytest.raises(ScenarioError, match="row 5: negative"):
        load_series_csv(write_column(tmp_path / "b.csv", vals), "m/s")
    # temperature may be negative
    assert load_series_csv(write_column(tmp_path / "c.csv", vals), "°C").values[4] == -2


def test_load_missing_file(tmp_path):
    with pytest.raises(ScenarioError, match="missing"):
        load_series_csv(tmp_path / "nope.csv", "W")


def test_synth_load_constant():
    s = synth_load([500.0] * 24, 0.0, 3)
    assert_array_equal(s.values, np.full(HOURS, 500.0))


def test_synth_load_deterministic_and_mean():
    a = synth_load([500.0] * 24, 0.1, 7)
    b = synth_load([500.0] * 24, 0.1, 7)
    assert_array_equal(a.values, b.values)
    assert abs(a.values.mean() - 500.0) < 5.0


@pytest.mark.parametrize("profile, noise", [([-1.0] + [1.0] * 23, 0.1), ([1.0] * 24, 1.0), ([1.0] * 24, -0.1)])
def test_synth_load_errors(profile, noise):
    with pytest.raises(ValueError):
        synth_load(profile, noise, 0)


def test_synth_scenario_valid(scenario):
    assert validate_scenario(scenario) == []
    assert np.all(scenario.diffuse.values <= scenario.ghi.values)
    # night hours carry no irradiance
    assert np.all(scenario.ghi.values[0::24] == 0.0)


def test_synth_scenario_zero_waste():
    s = synth_scenario(SiteConfig(), SynthesisParams(waste_per_day_kg=0.0), 4)
    assert not s.food_waste.values.any()


def test_synth_scenario_deterministic(scenario):
    again = synth_scenario(SiteConfig(), SynthesisParams(), 1)
    for name, series in scenario.series().items():
        assert_array_equal(series.values, again.series()[name].values)
    assert_allclose(np.mean(scenario.wind_speed_ref.values ** 3), WIND_CUBE_MEAN_SEED1, rtol=1e-9)


def test_synth_scenario_noise_free_is_periodic():
    p = SynthesisParams(cloud_variability=0.0, wind_noise=0.0, temp_noise_c=0.0, temp_annual_amplitude_c=0.0,
                        load_noise_fraction=0.0, waste_noise_fraction=0.0)
    a = synth_scenario(SiteConfig(), p, 1)
    b = synth_scenario(SiteConfig(), p, 99)
    for name in ("load", "food_waste", "ambient_temp", "wind_speed_ref", "ghi"):
        assert_array_equal(a.series()[name].values, b.series()[name].values)
    daily = a.load.values.reshape(-1, 24)
    assert np.all(daily == daily[0])


@pytest.mark.parametrize("kw", [{"weibull_scale_ms": 0.0}, {"clear_sky_peak_wm2": -1.0}])
def test_synth_params_errors(kw):
    with pytest.raises(ValueError):
        SynthesisParams(**kw)


def _replace(s, **series):
    kw = s.series()
    kw.update(series)
    return ScenarioData(site=s.site, **kw)


def test_validate_flags_diffuse_hour(scenario):
    d = scenario.diffuse.values.copy()
    d[40] = scenario.ghi.values[40] + 1.0
    problems = validate_scenario(_replace(scenario, diffuse=HourlySeries(d, "W/m²")))
    assert len(problems) == 1
    assert problems[0].hour == 40
    assert "diffuse" in str(problems[0])


def test_validate_length(scenario):
    problems = validate_scenario(_replace(scenario, load=HourlySeries(np.ones(100), "W")))
    assert [p.rule for p in problems] == ["length 100 ≠ 8760"]


def test_site_validation():
    with pytest.raises(ValueError):
        SiteConfig(latitude_deg=91)
    with pytest.raises(ValueError):
        SiteConfig(ground_reflectance=1.5)
    with pytest.raises(ValueError):
        SiteConfig(bus_voltage_v=0)


def test_csv_round_trip(tmp_path, scenario):
    path = write_scenario_csv(scenario, tmp_path / "s.csv")
    back = read_scenario_csv(path)
    for name, series in scenario.series().items():
        assert_allclose(back.series()[name].values, series.values, atol=5e-7)
    assert path.read_text().splitlines()[0] == "hour,ghi_w_m2,diffuse_w_m2,temp_c,wind_ms,load_w,foodwaste_kg"


def test_csv_bad_row(tmp_path, scenario):
    path = write_scenario_csv(scenario, tmp_path / "s.csv")
    lines = path.read_text().splitlines()
    cells = lines[11].split(",")
    cells[5] = "oops"
    lines[11] = ",".join(cells)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ScenarioError, match="row 11"):
        read_scenario_csv(path)
