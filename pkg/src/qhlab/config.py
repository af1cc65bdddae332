"""Line-oriented configuration files: one ``key = value`` per line.

Blank lines and lines starting with ``#`` are skipped. Keys are dotted
paths from a fixed vocabulary (unknown keys are rejected so typos fail
loudly); the free namespace ``domain.params.*`` carries numeric domain
parameters straight to the factory, which does its own validation.

Example::

    domain.kind = paraboloid
    domain.params.kappa = 1.0
    window.lo = -2
    window.hi = 2
    grid.spacing = 0.015625
    experiment.mode = tangential-pair
    experiment.rungs = 8
    output.format = csv
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .geom.domains import Domain, make_domain
from .solver.grid import GridSpec

_DOMAIN_PARAM_PREFIX = "domain.params."


def parse_point(text: str) -> np.ndarray:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ConfigError(f"bad point {text!r}: {exc}") from None


def _float_list(text: str) -> list[float]:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    return [float(p) for p in parts]


def _choice(*allowed: str):
    def convert(text: str) -> str:
        if text not in allowed:
            raise ValueError(f"must be one of {allowed}")
        return text
    return convert


_KNOWN = {
    "domain.kind": str,
    "domain.dim": int,
    "window.lo": float,
    "window.hi": float,
    "grid.spacing": float,
    "grid.margin": float,
    "grid.stencil": int,
    "experiment.mode": _choice("normal-pair", "tangential-pair", "fixed-ratio"),
    "experiment.t0": float,
    "experiment.rungs": int,
    "experiment.ratio": float,
    "experiment.c": float,
    "experiment.c_values": _float_list,
    "experiment.zeta": parse_point,
    "experiment.depth": float,
    "output.format": _choice("csv", "json"),
    "output.path": str,
    "output.timestamp": str,
}


def parse_config_text(text: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = key.strip(), value.strip()
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key.startswith(_DOMAIN_PARAM_PREFIX):
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: {key} needs a number, got {value!r}") from None
            continue
        converter = _KNOWN.get(key)
        if converter is None:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = converter(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text)


def merge_overrides(config: dict, overrides: dict) -> dict:
    """Non-None override values shadow config-file keys."""
    merged = dict(config)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    return merged


def build_domain(config: dict) -> Domain:
    kind = config.get("domain.kind")
    if kind is None:
        raise ConfigError("domain.kind is required")
    params = {key[len(_DOMAIN_PARAM_PREFIX):]: value
              for key, value in config.items()
              if key.startswith(_DOMAIN_PARAM_PREFIX)}
    if "domain.dim" in config:
        params["dim"] = config["domain.dim"]
    lo, hi = config.get("window.lo"), config.get("window.hi")
    if (lo is None) != (hi is None):
        raise ConfigError("window.lo and window.hi must be given together")
    if lo is not None:
        params["window"] = (lo, hi)
    try:
        return make_domain(kind, **params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_grid(config: dict) -> GridSpec | None:
    """GridSpec from grid.* keys; None when none are present."""
    keys = [k for k in config if k.startswith("grid.")]
    if not keys:
        return None
    if "grid.spacing" not in config:
        raise ConfigError("grid.spacing is required when grid keys are set")
    kwargs = {"spacing": config["grid.spacing"]}
    if "grid.margin" in config:
        kwargs["margin"] = config["grid.margin"]
    if "grid.stencil" in config:
        kwargs["stencil"] = config["grid.stencil"]
    try:
        return GridSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
