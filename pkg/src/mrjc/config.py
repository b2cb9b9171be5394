"""Run configuration: JSON loading, validation and shipped presets."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .model import BasisState, ModelParams, chain_k, default_seed

OUTPUT_KINDS = ("series", "spectrum", "layout")
PARAM_FIELDS = ("E1", "E2", "E3", "omega1", "omega2", "g1", "g2eff", "kappa")
PRESETS = ("fig3", "fig4")


class ConfigError(ValueError):
    """Invalid run configuration; message names the offending field or line."""


@dataclass
class WaveguideOptions:
    chi: float
    alpha: float
    n_s: float
    a: float
    wavelength: float
    omega1_scale: float = 1.0


@dataclass
class Sweep:
    name: str
    values: list


@dataclass
class RunConfig:
    params: ModelParams
    seed: BasisState
    n_max: Union[int, str] = "auto"
    t_max: float = 3 * 2 * math.pi
    samples_per_period: int = 2048
    tol: float = 1e-8
    threshold: float = 0.5
    outputs: list = field(default_factory=lambda: ["series", "spectrum"])
    waveguide: Optional[WaveguideOptions] = None
    sweep: Optional[Sweep] = None

    def to_dict(self) -> dict:
        p = self.params
        out = {
            "params": {name: getattr(p, name) for name in PARAM_FIELDS},
            "seed": asdict(self.seed),
            "n_max": self.n_max,
            "t_max": self.t_max,
            "samples_per_period": self.samples_per_period,
            "tol": self.tol,
            "threshold": self.threshold,
            "outputs": list(self.outputs),
            "waveguide": None if self.waveguide is None else asdict(self.waveguide),
            "sweep": None if self.sweep is None else asdict(self.sweep),
        }
        if out["waveguide"] is not None:
            out["waveguide"]["lambda"] = out["waveguide"].pop("wavelength")
        return out


def _number(raw: dict, key: str, path: str, default=None, positive=False, integer=False):
    if key not in raw:
        if default is None:
            raise ConfigError(f"{path}.{key}: required field missing")
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{path}.{key}: expected a finite number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"{path}.{key}: must be > 0, got {value!r}")
    return int(value) if integer else float(value)


def _check_keys(raw, allowed, path):
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected an object, got {type(raw).__name__}")
    unknown = sorted(set(raw) - set(allowed))
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {', '.join(unknown)}")


def parse_params(raw: dict, path: str = "params") -> ModelParams:
    _check_keys(raw, PARAM_FIELDS, path)
    kwargs = {}
    for key in PARAM_FIELDS:
        if key in raw:
            kwargs[key] = _number(raw, key, path, integer=(key == "kappa"))
    for key in ("E1", "E2"):
        if key not in kwargs:
            raise ConfigError(f"{path}.{key}: required field missing")
    try:
        return ModelParams(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def parse_config(raw: dict) -> RunConfig:
    _check_keys(
        raw,
        ("params", "seed", "n_max", "t_max", "samples_per_period", "tol", "threshold", "outputs", "waveguide", "sweep", "name"),
        "config",
    )
    if "params" not in raw:
        raise ConfigError("config.params: required field missing")
    params = parse_params(raw["params"])

    seed = default_seed(params)
    if "seed" in raw:
        s = raw["seed"]
        _check_keys(s, ("level", "n", "k"), "config.seed")
        level = _number(s, "level", "config.seed", integer=True)
        if level not in (1, 2, 3):
            raise ConfigError(f"config.seed.level: must be 1, 2 or 3, got {level}")
        n = _number(s, "n", "config.seed", default=0, integer=True)
        k = _number(s, "k", "config.seed", default=chain_k(params, level), integer=True)
        try:
            seed = BasisState(level, n, k)
        except ValueError as exc:
            raise ConfigError(f"config.seed: {exc}") from None
        if k != chain_k(params, level):
            raise ConfigError(f"config.seed.k: level {level} needs k={chain_k(params, level)} for kappa={params.kappa}")

    n_max = raw.get("n_max", "auto")
    if n_max != "auto":
        n_max = _number(raw, "n_max", "config", integer=True)
        if n_max < seed.n:
            raise ConfigError(f"config.n_max: {n_max} is below the seed Fock number {seed.n}")

    cfg = RunConfig(
        params=params,
        seed=seed,
        n_max=n_max,
        t_max=_number(raw, "t_max", "config", default=RunConfig.t_max, positive=True),
        samples_per_period=_number(raw, "samples_per_period", "config", default=2048, integer=True),
        tol=_number(raw, "tol", "config", default=1e-8, positive=True),
        threshold=_number(raw, "threshold", "config", default=0.5),
    )
    if cfg.samples_per_period < 16:
        raise ConfigError(f"config.samples_per_period: must be >= 16, got {cfg.samples_per_period}")

    if "outputs" in raw:
        outputs = raw["outputs"]
        if not isinstance(outputs, list) or any(o not in OUTPUT_KINDS for o in outputs):
            raise ConfigError(f"config.outputs: expected a list drawn from {list(OUTPUT_KINDS)}, got {outputs!r}")
        cfg.outputs = list(dict.fromkeys(outputs))

    if raw.get("waveguide") is not None:
        w = raw["waveguide"]
        _check_keys(w, ("chi", "alpha", "n_s", "a", "lambda", "omega1_scale"), "config.waveguide")
        cfg.waveguide = WaveguideOptions(
            chi=_number(w, "chi", "config.waveguide", positive=True),
            alpha=_number(w, "alpha", "config.waveguide", positive=True),
            n_s=_number(w, "n_s", "config.waveguide", positive=True),
            a=_number(w, "a", "config.waveguide", positive=True),
            wavelength=_number(w, "lambda", "config.waveguide", positive=True),
            omega1_scale=_number(w, "omega1_scale", "config.waveguide", default=1.0, positive=True),
        )
    if "layout" in cfg.outputs and cfg.waveguide is None:
        raise ConfigError("config.waveguide: required when outputs include 'layout' (chi, alpha, n_s, a, lambda)")

    if raw.get("sweep") is not None:
        sw = raw["sweep"]
        _check_keys(sw, ("name", "values"), "config.sweep")
        name, values = sw.get("name"), sw.get("values")
        if name not in PARAM_FIELDS:
            raise ConfigError(f"config.sweep.name: must be one of {list(PARAM_FIELDS)}, got {name!r}")
        if not isinstance(values, list) or not values:
            raise ConfigError("config.sweep.values: expected a non-empty list")
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"config.sweep.values[{i}]: expected a finite number, got {v!r}")
        cfg.sweep = Sweep(name, [float(v) if name != "kappa" else int(v) for v in values])
    return cfg


def load_config(path) -> RunConfig:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(raw)


def load_preset(name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files("mrjc").joinpath("presets", f"{name}.json").read_text()
    return parse_config(json.loads(text))
