"""End-to-end tests for the command-line runner.

Each test drives ``bousslab.cli.main`` in-process with a small JSON config
written to a temp directory, then inspects exit codes and the artifact set
(report.json / series.csv / rates.csv / SVG plots).
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest

from bousslab.cli import EXIT_BAD_CONFIG, EXIT_BLOWUP, EXIT_OK, EXIT_VERDICT_FAILED, OUT_ENV_VAR, main

SCHEMA_PATH = Path(__file__).resolve().parents[1] / "src" / "bousslab" / "schema" / "report_schema.json"

EXPERIMENT_IDS = (
    "linear_rates",
    "profile_gap",
    "nonlinear_rates",
    "nl_vs_linear_gap",
    "lemma_certify",
    "oracle_crosscheck",
)


def small_linear_config(**overrides) -> dict:
    """A cheap linear-rates config (runs in well under a second)."""
    cfg = {
        "experiment": "linear_rates",
        "seed": 0,
        "model": {"alpha": -1.0, "beta": 1.0},
        "discretization": {"n": 1, "L": 200.0, "N": 256, "dt": 0.05, "T": 10.0},
        "data": {"kind": "gaussian", "amplitude": 1.0, "width": 1.0},
        "analysis": {
            "k_list": [0, 1],
            "fit_window": [100.0, 10000.0],
            "n_times": 12,
            "slope_tol": 0.05,
        },
    }
    for key, value in overrides.items():
        if isinstance(value, dict):
            cfg[key] = {**cfg[key], **value}
        else:
            cfg[key] = value
    return cfg


def write_config(tmp_path: Path, cfg: dict, name: str = "cfg.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


class TestList:
    def test_lists_every_experiment_with_description(self, capsys):
        assert main(["list"]) == EXIT_OK
        out = capsys.readouterr().out
        for name in EXPERIMENT_IDS:
            assert name in out
        # every line is "<id> -> <what it verifies>"
        lines = [ln for ln in out.splitlines() if ln.strip()]
        assert len(lines) == len(EXPERIMENT_IDS)
        assert all(" -> " in ln for ln in lines)


class TestRunArtifacts:
    def test_passing_run_writes_full_artifact_set(self, tmp_path, capsys):
        cfg = write_config(tmp_path, small_linear_config())
        out_dir = tmp_path / "out"
        assert main(["run", str(cfg), "--out", str(out_dir)]) == EXIT_OK

        assert (out_dir / "report.json").is_file()
        assert (out_dir / "series.csv").is_file()
        assert (out_dir / "rates.csv").is_file()
        svgs = sorted(p.name for p in out_dir.glob("*.svg"))
        assert svgs == ["linear_k0.svg", "linear_k1.svg"]

        header = (out_dir / "series.csv").read_text().splitlines()[0]
        assert header == "experiment_id,t,k,norm_kind,value"

        stdout = capsys.readouterr().out
        assert "PASS linear_rates" in stdout
        assert f"-> {out_dir}" in stdout

    def test_report_json_matches_bundled_schema(self, tmp_path):
        cfg = write_config(tmp_path, small_linear_config())
        out_dir = tmp_path / "out"
        assert main(["run", str(cfg), "--out", str(out_dir)]) == EXIT_OK
        report = json.loads((out_dir / "report.json").read_text())
        schema = json.loads(SCHEMA_PATH.read_text())
        jsonschema.validate(report, schema)
        assert report["experiment"] == "linear_rates"
        assert report["passed"] is True
        assert all(v["status"] == "pass" for v in report["verdicts"])

    def test_verdict_lines_name_the_criterion(self, tmp_path, capsys):
        cfg = write_config(tmp_path, small_linear_config())
        assert main(["run", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "[pass]" in out
        assert "AC4" in out

    def test_out_dir_defaults_to_env_var(self, tmp_path, monkeypatch):
        base = tmp_path / "artifact-base"
        monkeypatch.setenv(OUT_ENV_VAR, str(base))
        cfg = write_config(tmp_path, small_linear_config())
        assert main(["run", str(cfg)]) == EXIT_OK
        assert (base / "linear_rates" / "report.json").is_file()


class TestExitCodes:
    def test_verdict_failure_returns_one(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, small_linear_config(analysis={"slope_tol": 1e-6}))
        rc = main(["run", str(cfg), "--out", str(tmp_path / "o")])
        assert rc == EXIT_VERDICT_FAILED
        out = capsys.readouterr().out
        assert "FAIL linear_rates" in out
        assert "[fail]" in out

    def test_unknown_config_key_returns_two(self, tmp_path, capsys):
        bad = small_linear_config()
        bad["model"]["alpa"] = -1.0
        cfg = write_config(tmp_path, bad)
        assert main(["run", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_BAD_CONFIG
        err = capsys.readouterr().err
        assert "unknown key" in err
        assert "alpa" in err

    def test_malformed_json_returns_two(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "experiment": "linear_rates",\n  nope\n}')
        assert main(["run", str(path), "--out", str(tmp_path / "o")]) == EXIT_BAD_CONFIG
        assert "line 3" in capsys.readouterr().err

    def test_missing_config_file_returns_two(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "o")]) == EXIT_BAD_CONFIG
        assert "cannot read config" in capsys.readouterr().err

    def test_blow_up_returns_three(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "experiment": "nonlinear_rates",
            "seed": 0,
            "model": {"alpha": -1.0, "beta": 1.0,
                      "f_kind": "quadratic", "g_kind": "quadratic"},
            "discretization": {"n": 1, "L": 30.0, "N": 64, "dt": 0.1,
                               "T": 1.0, "out_every": 1},
            "data": {"kind": "gaussian", "amplitude": 1e100, "width": 0.5},
            "analysis": {"k_list": [0], "fit_window": [0.2, 0.9],
                         "slope_tol": 0.1},
        })
        rc = main(["run", str(cfg), "--out", str(tmp_path / "o")])
        assert rc == EXIT_BLOWUP
        assert "blow-up" in capsys.readouterr().err

    def test_no_arguments_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 2
        assert "usage" in capsys.readouterr().err


class TestDeterminism:
    def test_series_csv_identical_across_repeat_runs(self, tmp_path):
        cfg = write_config(tmp_path, small_linear_config())
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", str(cfg), "--out", str(a)]) == EXIT_OK
        assert main(["run", str(cfg), "--out", str(b)]) == EXIT_OK
        assert (a / "series.csv").read_bytes() == (b / "series.csv").read_bytes()
        assert (a / "rates.csv").read_bytes() == (b / "rates.csv").read_bytes()

    def test_series_csv_identical_across_thread_counts(self, tmp_path):
        cfg = write_config(tmp_path, small_linear_config())
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", str(cfg), "--out", str(a), "--threads", "1"]) == EXIT_OK
        assert main(["run", str(cfg), "--out", str(b), "--threads", "4"]) == EXIT_OK
        assert (a / "series.csv").read_bytes() == (b / "series.csv").read_bytes()


class TestReplot:
    def test_replot_recreates_the_svg_set(self, tmp_path, capsys):
        cfg = write_config(tmp_path, small_linear_config())
        out_dir = tmp_path / "out"
        assert main(["run", str(cfg), "--out", str(out_dir)]) == EXIT_OK
        originals = sorted(p.name for p in out_dir.glob("*.svg"))
        byte_sizes = {p.name: p.stat().st_size for p in out_dir.glob("*.svg")}
        for p in out_dir.glob("*.svg"):
            p.unlink()
        capsys.readouterr()

        assert main(["replot", str(out_dir / "series.csv")]) == EXIT_OK
        regenerated = sorted(p.name for p in out_dir.glob("*.svg"))
        assert regenerated == originals
        # theory-slope guides come back from the sibling report.json, so the
        # regenerated plots carry the same content as the originals
        for p in out_dir.glob("*.svg"):
            assert p.stat().st_size == byte_sizes[p.name]
        stdout = capsys.readouterr().out
        for name in originals:
            assert name in stdout

    def test_replot_missing_series_returns_two(self, tmp_path, capsys):
        rc = main(["replot", str(tmp_path / "missing.csv")])
        assert rc == EXIT_BAD_CONFIG
        assert "error" in capsys.readouterr().err


class TestZeroAmplitude:
    def test_zero_data_skips_fits_and_passes(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, small_linear_config(data={"amplitude": 0.0}))
        out_dir = tmp_path / "out"
        assert main(["run", str(cfg), "--out", str(out_dir)]) == EXIT_OK

        report = json.loads((out_dir / "report.json").read_text())
        assert report["passed"] is True
        assert all(f.get("skipped") == "zero series" for f in report["fits"])
        assert all(v["status"] == "skip" for v in report["verdicts"])

        rates = (out_dir / "rates.csv").read_text()
        assert "skip" in rates
        # all-zero series cannot be drawn on a log scale, so no plots appear
        assert list(out_dir.glob("*.svg")) == []
        assert "PASS linear_rates" in capsys.readouterr().out
