"""Config parsing: round trips, unknown keys, and diagnostics."""
from __future__ import annotations

import json

import pytest

from bousslab import (AnalysisConfig, ConfigError, DataConfig,
                      DiscretizationConfig, ExperimentConfig, ModelConfig,
                      load_config)

VALID = {
    "experiment": "linear_rates",
    "seed": 3,
    "model": {"alpha": -1.5, "beta": 2.0, "f_kind": "cubic", "g_kind": "none"},
    "discretization": {"n": 2, "L": 100.0, "N": 128, "dt": 0.02, "T": 30.0,
                       "out_every": 5},
    "data": {"kind": "gaussian", "amplitude": 0.5, "width": 2.0},
    "analysis": {"k_list": [0, 1], "fit_window": [10.0, 500.0],
                 "slope_tol": 0.04},
}


class TestRoundTrip:
    def test_dict_round_trip_is_lossless(self):
        cfg = ExperimentConfig.from_dict(VALID)
        again = ExperimentConfig.from_dict(cfg.to_dict())
        assert again == cfg
        assert again.to_dict() == cfg.to_dict()

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(VALID))
        cfg = load_config(path)
        assert cfg.experiment == "linear_rates"
        assert cfg.model.alpha == -1.5
        assert cfg.discretization.N == 128
        assert cfg.analysis.k_list == (0, 1)
        assert cfg.analysis.fit_window == (10.0, 500.0)

    def test_defaults_fill_missing_sections(self):
        cfg = ExperimentConfig.from_dict({"experiment": "lemma_certify"})
        assert cfg.model == ModelConfig()
        assert cfg.discretization == DiscretizationConfig()
        assert cfg.data == DataConfig()
        assert cfg.analysis == AnalysisConfig()
        assert cfg.seed == 0


class TestValidation:
    def test_unknown_experiment_rejected(self):
        with pytest.raises(ConfigError, match="experiment"):
            ExperimentConfig.from_dict({"experiment": "warp_drive"})

    def test_unknown_keys_are_hard_errors(self):
        bad = dict(VALID, extra=1)
        with pytest.raises(ConfigError, match="unknown key"):
            ExperimentConfig.from_dict(bad)
        bad = dict(VALID, model={"alpha": -1.0, "alpa": -1.0})
        with pytest.raises(ConfigError, match=r"model\..?alpa"):
            ExperimentConfig.from_dict(bad)

    @pytest.mark.parametrize("section,key,value", [
        ("model", "alpha", -0.5),
        ("model", "beta", 0.0),
        ("model", "f_kind", "quartic"),
        ("model", "g_sign", 0.0),
        ("discretization", "n", 4),
        ("discretization", "N", 15),
        ("discretization", "N", 4),
        ("discretization", "L", -1.0),
        ("discretization", "dt", 0.0),
        ("discretization", "out_every", 0),
        ("data", "kind", "checkerboard"),
        ("data", "width", 0.0),
        ("data", "eps", 1.5),
        ("analysis", "k_list", [0, 9]),
        ("analysis", "fit_window", [100.0, 10.0]),
        ("analysis", "n_times", 4),
        ("analysis", "slope_tol", 0.0),
    ])
    def test_bad_values_rejected_with_field_name(self, section, key, value):
        bad = json.loads(json.dumps(VALID))
        bad[section][key] = value
        with pytest.raises(ConfigError, match=key):
            ExperimentConfig.from_dict(bad)

    def test_booleans_are_not_numbers(self):
        bad = json.loads(json.dumps(VALID))
        bad["discretization"]["N"] = True
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(bad)

    def test_custom_file_requires_path(self):
        bad = json.loads(json.dumps(VALID))
        bad["data"] = {"kind": "custom_file"}
        with pytest.raises(ConfigError, match="path"):
            ExperimentConfig.from_dict(bad)


class TestFileDiagnostics:
    def test_invalid_json_reports_line_and_column(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "experiment": "linear_rates",\n  oops\n}\n')
        with pytest.raises(ConfigError, match=r"line 3"):
            load_config(path)

    def test_missing_file_reported(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read config"):
            load_config(tmp_path / "absent.json")

    def test_non_object_top_level_rejected(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(ConfigError):
            load_config(path)
