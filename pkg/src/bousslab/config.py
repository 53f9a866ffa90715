"""Experiment configuration: typed dataclasses with strict JSON loading.

Configs are plain JSON objects mirrored by frozen dataclasses.  Loading is
strict — unknown keys, wrong types, and out-of-range values raise
``ConfigError`` with the offending field path — and ``to_dict`` round-trips
losslessly so that a report can embed the exact configuration it ran.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

EXPERIMENTS = ("linear_rates", "nonlinear_rates", "profile_gap",
               "nl_vs_linear_gap", "lemma_certify", "oracle_crosscheck")


class ConfigError(ValueError):
    """A configuration file or dictionary is invalid; message names the field."""


def _check_unknown(section: str, data: Mapping[str, Any], allowed: set[str]) -> None:
    extra = set(data) - allowed
    if extra:
        key = sorted(extra)[0]
        raise ConfigError(f"unknown key {section}{key!r} "
                          f"(allowed: {', '.join(sorted(allowed))})")


def _require(section: str, name: str, value: Any, kinds, pred=None, what: str = "") -> Any:
    if isinstance(value, bool) and bool not in (kinds if isinstance(kinds, tuple) else (kinds,)):
        raise ConfigError(f"{section}{name}: expected a number, got a boolean")
    if not isinstance(value, kinds):
        raise ConfigError(f"{section}{name}: expected {what or kinds}, got {value!r}")
    if pred is not None and not pred(value):
        raise ConfigError(f"{section}{name}: invalid value {value!r}" +
                          (f" ({what})" if what else ""))
    return value


@dataclass(frozen=True)
class ModelConfig:
    """Equation parameters and the shape of the nonlinearity."""

    alpha: float = -1.0
    beta: float = 1.0
    f_kind: str = "quadratic"
    g_kind: str = "quadratic"
    g_sign: float = 1.0

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], section: str = "model.") -> "ModelConfig":
        _check_unknown(section, data, {f.name for f in fields(cls)})
        out: dict[str, Any] = {}
        if "alpha" in data:
            out["alpha"] = float(_require(section, "alpha", data["alpha"], (int, float),
                                          lambda a: a <= -1.0, "must be <= -1"))
        if "beta" in data:
            out["beta"] = float(_require(section, "beta", data["beta"], (int, float),
                                         lambda b: b > 0.0, "must be > 0"))
        for key in ("f_kind", "g_kind"):
            if key in data:
                out[key] = _require(section, key, data[key], str,
                                    lambda s: s in ("none", "quadratic", "cubic"),
                                    "one of none, quadratic, cubic")
        if "g_sign" in data:
            out["g_sign"] = float(_require(section, "g_sign", data["g_sign"], (int, float),
                                           lambda s: s in (-1.0, 1.0, -1, 1), "must be +-1"))
        return cls(**out)


@dataclass(frozen=True)
class DiscretizationConfig:
    """Grid and time-stepping parameters."""

    n: int = 1
    L: float = 200.0
    N: int = 256
    dt: float = 0.05
    T: float = 10.0
    out_every: int = 1

    @classmethod
    def from_dict(cls, data: Mapping[str, Any],
                  section: str = "discretization.") -> "DiscretizationConfig":
        _check_unknown(section, data, {f.name for f in fields(cls)})
        out: dict[str, Any] = {}
        if "n" in data:
            out["n"] = _require(section, "n", data["n"], int,
                                lambda v: v in (1, 2, 3), "1, 2, or 3")
        if "L" in data:
            out["L"] = float(_require(section, "L", data["L"], (int, float),
                                      lambda v: 0 < v < math.inf, "must be positive and finite"))
        if "N" in data:
            out["N"] = _require(section, "N", data["N"], int,
                                lambda v: v >= 8 and v % 2 == 0, "must be even and >= 8")
        if "dt" in data:
            out["dt"] = float(_require(section, "dt", data["dt"], (int, float),
                                       lambda v: 0 < v < math.inf, "must be positive"))
        if "T" in data:
            out["T"] = float(_require(section, "T", data["T"], (int, float),
                                      lambda v: 0 < v < math.inf, "must be positive"))
        if "out_every" in data:
            out["out_every"] = _require(section, "out_every", data["out_every"], int,
                                        lambda v: v >= 1, "must be >= 1")
        return cls(**out)


@dataclass(frozen=True)
class DataConfig:
    """Initial data: a named family plus its shape parameters."""

    kind: str = "gaussian"
    amplitude: float = 1.0
    width: float = 1.0
    velocity_amplitude: float = 0.0
    eps: float = 0.2
    path: str = ""

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], section: str = "data.") -> "DataConfig":
        _check_unknown(section, data, {f.name for f in fields(cls)})
        out: dict[str, Any] = {}
        if "kind" in data:
            out["kind"] = _require(section, "kind", data["kind"], str,
                                   lambda s: s in ("gaussian", "radial_L2", "custom_file"),
                                   "one of gaussian, radial_L2, custom_file")
        for key, pred, what in (("amplitude", lambda v: math.isfinite(v), "must be finite"),
                                ("width", lambda v: v > 0, "must be > 0"),
                                ("velocity_amplitude", lambda v: math.isfinite(v), "must be finite"),
                                ("eps", lambda v: 0 < v < 1, "must lie in (0, 1)")):
            if key in data:
                out[key] = float(_require(section, key, data[key], (int, float), pred, what))
        if "path" in data:
            out["path"] = _require(section, "path", data["path"], str)
        cfg = cls(**out)
        if cfg.kind == "custom_file" and not cfg.path:
            raise ConfigError(f"{section}path: required when kind is 'custom_file'")
        return cfg


@dataclass(frozen=True)
class AnalysisConfig:
    """Fit windows, derivative orders, and certification grids."""

    k_list: tuple[int, ...] = (0, 1, 2)
    fit_window: tuple[float, float] = (10.0, 1000.0)
    n_times: int = 40
    slope_tol: float = 0.05
    c_floor: float = 0.1
    cap: float = 1e3
    r0: float = 0.5

    @classmethod
    def from_dict(cls, data: Mapping[str, Any],
                  section: str = "analysis.") -> "AnalysisConfig":
        _check_unknown(section, data, {f.name for f in fields(cls)})
        out: dict[str, Any] = {}
        if "k_list" in data:
            raw = _require(section, "k_list", data["k_list"], list,
                           lambda v: len(v) > 0, "must be nonempty")
            for i, k in enumerate(raw):
                _require(section, f"k_list[{i}]", k, int,
                         lambda v: 0 <= v <= 4, "must lie in 0..4")
            out["k_list"] = tuple(raw)
        if "fit_window" in data:
            raw = _require(section, "fit_window", data["fit_window"], list,
                           lambda v: len(v) == 2, "must be [lo, hi]")
            lo = float(_require(section, "fit_window[0]", raw[0], (int, float)))
            hi = float(_require(section, "fit_window[1]", raw[1], (int, float)))
            if not (0 <= lo < hi):
                raise ConfigError(f"{section}fit_window: need 0 <= lo < hi, got {raw}")
            out["fit_window"] = (lo, hi)
        if "n_times" in data:
            out["n_times"] = _require(section, "n_times", data["n_times"], int,
                                      lambda v: v >= 8, "must be >= 8")
        for key, pred, what in (("slope_tol", lambda v: v > 0, "must be > 0"),
                                ("c_floor", lambda v: v >= 0, "must be >= 0"),
                                ("cap", lambda v: v > 0, "must be > 0"),
                                ("r0", lambda v: v > 0, "must be > 0")):
            if key in data:
                out[key] = float(_require(section, key, data[key], (int, float), pred, what))
        return cls(**out)


@dataclass(frozen=True)
class ExperimentConfig:
    """Top-level run description: which experiment, with what pieces."""

    experiment: str
    seed: int = 0
    model: ModelConfig = field(default_factory=ModelConfig)
    discretization: DiscretizationConfig = field(default_factory=DiscretizationConfig)
    data: DataConfig = field(default_factory=DataConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        if not isinstance(data, Mapping):
            raise ConfigError(f"top level: expected a JSON object, got {type(data).__name__}")
        _check_unknown("", data, {f.name for f in fields(cls)})
        if "experiment" not in data:
            raise ConfigError("experiment: required key is missing")
        exp = _require("", "experiment", data["experiment"], str,
                       lambda s: s in EXPERIMENTS,
                       "one of " + ", ".join(EXPERIMENTS))
        seed = _require("", "seed", data.get("seed", 0), int,
                        lambda v: v >= 0, "must be >= 0")
        sections: dict[str, Any] = {}
        for name, sub in (("model", ModelConfig), ("discretization", DiscretizationConfig),
                          ("data", DataConfig), ("analysis", AnalysisConfig)):
            raw = data.get(name, {})
            if not isinstance(raw, Mapping):
                raise ConfigError(f"{name}: expected a JSON object, got {raw!r}")
            sections[name] = sub.from_dict(raw)
        return cls(experiment=exp, seed=seed, **sections)

    def to_dict(self) -> dict[str, Any]:
        raw = asdict(self)
        raw["analysis"]["k_list"] = list(self.analysis.k_list)
        raw["analysis"]["fit_window"] = list(self.analysis.fit_window)
        return raw


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate a JSON config file.

    JSON syntax errors are reported with their line and column; semantic
    errors name the offending field.
    """
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {p}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {p} at line {exc.lineno}, "
                          f"column {exc.colno}: {exc.msg}") from exc
    return ExperimentConfig.from_dict(raw)
