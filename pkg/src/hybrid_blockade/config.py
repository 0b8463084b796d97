"""TOML run configuration merged with command-line overrides.

Flat top-level keys are :class:`SystemParams` fields (rates in units of
``kappa``) plus ``n_cav``. Sweep axes live under ``[sweep.x]`` / ``[sweep.y]``
and are given in units of ``g1``; the hybrid-blockade track lives under
``[track]`` and the dressed spectrum range under ``[spectrum]``.

The default sweep ranges are a convention that frames every resonance
branch at ``K = 1``; nothing in the model fixes them.
"""

from __future__ import annotations

import copy
import sys

from .errors import ParameterError
from .model import SystemParams
from .sweep import SweepAxis, SweepGrid

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

PARAM_KEYS = ("g1", "g2", "delta", "Delta", "eta", "kappa", "gamma")

DEFAULTS: dict = {
    "g1": 10.0,
    "g2": 10.0,
    "delta": 4 * 8.16496580927726,
    "Delta": 8.16496580927726,
    "eta": 0.1,
    "kappa": 1.0,
    "gamma": 1.0,
    "n_cav": 5,
    "sweep": {
        "x": {"param": "Delta", "start": -2.5, "stop": 2.5, "num": 201},
        "y": {"param": "delta", "start": -5.0, "stop": 5.0, "num": 201},
        "observables": ["mean_photon", "g2", "pn"],
    },
    "track": {"K": [1.0, 1.5, 2.0, 2.5, 3.0], "branch": "primary"},
    "spectrum": {"start": -5.0, "stop": 5.0, "num": 201},
}


def _merge(into: dict, other: dict) -> dict:
    for key, value in other.items():
        if isinstance(value, dict) and isinstance(into.get(key), dict):
            _merge(into[key], value)
        else:
            into[key] = value
    return into


def load_config(path=None, overrides: dict | None = None) -> dict:
    """Defaults, then the file at ``path``, then ``overrides`` (``None`` values skipped)."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ParameterError(f"cannot read config {path}: {exc}") from exc
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        _merge(cfg, data)
    if overrides:
        _merge(cfg, {k: v for k, v in overrides.items() if v is not None})
        if overrides.get("K") is not None:
            cfg["g2"] = overrides["K"] * cfg["g1"]
    return cfg


def params_from_config(cfg: dict) -> SystemParams:
    try:
        return SystemParams(**{k: float(cfg[k]) for k in PARAM_KEYS})
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"bad parameter value: {exc}") from exc


def grid_from_config(cfg: dict) -> SweepGrid:
    sweep = cfg["sweep"]

    def axis(d):
        return SweepAxis(d["param"], float(d["start"]), float(d["stop"]), int(d["num"]))

    y = sweep.get("y")
    return SweepGrid(
        x=axis(sweep["x"]),
        y=axis(y) if y else None,
        base=params_from_config(cfg),
        n_cav=int(cfg["n_cav"]),
    )
