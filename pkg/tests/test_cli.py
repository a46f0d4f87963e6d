import math

import pytest
import yaml

from click.testing import CliRunner

from tcubature import __version__
from tcubature.cli import main

SCENARIO = {
    "dt": 1.0,
    "steps": 10,
    "sigma_w": 1.0e-6,
    "sigma_v": 4.0e-4,
}


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def config(tmp_path):
    def write(data):
        path = tmp_path / "experiment.yaml"
        path.write_text(yaml.safe_dump(data))
        return str(path)

    return write


def parse(output):
    rv = {}
    for line in output.splitlines():
        key, _, values = line.partition(":")
        rv[key] = [float(v) if v != "" else math.nan for v in values.split()]
    return rv


def test_version(runner):
    result = runner.invoke(main, ["--version"])

    assert result.exit_code == 0
    assert __version__ in result.output


def test_run_missing_key(runner, config):
    scenario = dict(SCENARIO)
    del scenario["sigma_v"]

    result = runner.invoke(
        main, ["run", "--config", config({"scenario": scenario})]
    )

    assert result.exit_code == 2
    assert "sigma_v" in result.output


def test_run_unknown_filter(runner, config, tmp_path):
    result = runner.invoke(
        main,
        [
            "run",
            "--config",
            config({"scenario": SCENARIO}),
            "--filters",
            "kalman",
            "--out",
            str(tmp_path / "out"),
        ],
    )

    assert result.exit_code == 2
    assert "kalman" in result.output


def test_run_reproducible(runner, config, tmp_path):
    path = config(
        {"scenario": SCENARIO, "filters": {"rstscf": None, "sif": None}}
    )

    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        result = runner.invoke(
            main,
            [
                "run",
                "--config",
                path,
                "--seed",
                "7",
                "--runs",
                "2",
                "-N",
                "5",
                "--workers",
                "1",
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "rstscf" in result.output

        outputs.append(
            (
                (out / "summary.csv").read_bytes(),
                (out / "rmse_series.csv").read_bytes(),
            )
        )

    assert outputs[0] == outputs[1]

    summary = outputs[0][0].decode().splitlines()
    assert summary[0] == (
        "filter,armse_pos_km,armse_vel_km_per_min,mean_step_time_ms,"
        "diverged_runs"
    )
    assert summary[1].startswith("rstscf,")
    assert summary[1].split(",")[3] == ""
    assert summary[2].startswith("sif,")

    series = outputs[0][1].decode().splitlines()
    assert len(series) == SCENARIO["steps"] + 1
    assert series[0] == (
        "k,rstscf_rmse_pos_km,rstscf_rmse_vel_km_per_min,"
        "sif_rmse_pos_km,sif_rmse_vel_km_per_min"
    )


def test_run_timing(runner, config, tmp_path):
    out = tmp_path / "out"
    result = runner.invoke(
        main,
        [
            "run",
            "--config",
            config({"scenario": SCENARIO, "filters": {"rstcf_det": None}}),
            "--seed",
            "7",
            "--runs",
            "1",
            "--workers",
            "1",
            "--timing",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0, result.output

    summary = (out / "summary.csv").read_text().splitlines()
    assert summary[1].startswith("rstcf_det,")
    assert float(summary[1].split(",")[3]) >= 0.0


def test_check_rule_small_dof(runner):
    result = runner.invoke(main, ["check-rule", "--nu", "1.5"])

    assert result.exit_code == 2
    assert "nu" in result.output


def test_integrate_mean(runner):
    result = runner.invoke(
        main, ["integrate", "mean", "--mu", "1", "--mu", "2", "--seed", "3"]
    )

    assert result.exit_code == 0, result.output

    values = parse(result.output)
    assert values["estimate"] == pytest.approx([1.0, 2.0])
    assert values["oracle"] == [1.0, 2.0]
    assert all(math.isnan(se) for se in values["se"])


def test_integrate_cov(runner):
    result = runner.invoke(
        main,
        ["integrate", "cov", "--mu", "0", "--mu", "0", "--sigma", "2"],
    )

    assert result.exit_code == 0, result.output

    values = parse(result.output)
    expected = [2.0 * 5.0 / 3.0, 0.0, 0.0, 2.0 * 5.0 / 3.0]
    assert values["estimate"] == pytest.approx(expected, rel=1e-8, abs=1e-8)
    assert values["oracle"] == pytest.approx(expected)


def test_integrate_cos_stochastic(runner):
    result = runner.invoke(
        main, ["integrate", "cos1d", "-N", "2000", "--seed", "1"]
    )

    assert result.exit_code == 0, result.output

    values = parse(result.output)
    assert values["gap"][0] <= 4 * values["se"][0]


def test_integrate_cos_deterministic(runner):
    result = runner.invoke(
        main, ["integrate", "cos1d", "--rule", "stsrcr", "--nu", "8"]
    )

    assert result.exit_code == 0, result.output

    values = parse(result.output)
    assert values["se"] == [0.0]
    assert values["estimate"][0] == pytest.approx(
        math.cos(math.sqrt(8.0 / 6.0)), rel=1e-9
    )


def test_integrate_gaussian_rule(runner):
    result = runner.invoke(
        main, ["integrate", "cos1d", "--rule", "sir", "-N", "2000"]
    )

    assert result.exit_code == 0, result.output

    values = parse(result.output)
    assert values["oracle"][0] == pytest.approx(math.exp(-0.5))
    assert values["gap"][0] <= 4 * values["se"][0]


def test_integrate_bad_sigma(runner):
    result = runner.invoke(
        main,
        [
            "integrate",
            "mean",
            "--mu",
            "0",
            "--mu",
            "0",
            "--sigma",
            "1",
            "--sigma",
            "2",
            "--sigma",
            "3",
        ],
    )

    assert result.exit_code == 2
    assert "sigma" in result.output
