"""Reading and writing two-mode states as JSON files.

Two formats share one envelope {"format": ..., "entries": ...}:

* "quad": entries is the 4x4 quadrature covariance, row major, 16 reals
  (a nested 4x4 list of reals is also accepted on input).
* "mode": entries is {"n1", "n2", "m1", "m2", "ms", "mc"} where the
  occupations are reals and the four complex moments are [re, im] pairs.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ConfigError
from .states import ModeCovariance, QuadCovariance

__all__ = ["load_state", "save_state", "state_to_dict", "state_from_dict"]

_MODE_REAL_KEYS = ("n1", "n2")
_MODE_COMPLEX_KEYS = ("m1", "m2", "ms", "mc")


def _complex_pair(value, key: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(p, (int, float)) for p in value)
    ):
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"field {key!r} must be a number or an [re, im] pair")


def state_from_dict(data) -> QuadCovariance | ModeCovariance:
    """Build a state from the JSON envelope, raising ConfigError on junk."""
    if not isinstance(data, dict):
        raise ConfigError("state file must contain a JSON object")
    fmt = data.get("format")
    if fmt not in ("quad", "mode"):
        raise ConfigError(f"unknown state format {fmt!r} (expected 'quad' or 'mode')")
    if "entries" not in data:
        raise ConfigError("state file is missing the 'entries' field")
    entries = data["entries"]

    if fmt == "quad":
        try:
            arr = np.asarray(entries, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"quad entries are not numeric: {exc}") from exc
        if arr.shape == (16,):
            arr = arr.reshape(4, 4)
        if arr.shape != (4, 4):
            raise ConfigError(
                f"quad entries must be 16 reals or a 4x4 array, got shape {arr.shape}"
            )
        try:
            return QuadCovariance(arr)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    if not isinstance(entries, dict):
        raise ConfigError("mode entries must be an object")
    missing = [k for k in _MODE_REAL_KEYS if k not in entries]
    if missing:
        raise ConfigError(f"mode entries are missing {missing}")
    kwargs = {}
    for key in _MODE_REAL_KEYS:
        value = entries[key]
        if not isinstance(value, (int, float)):
            raise ConfigError(f"field {key!r} must be a real number")
        kwargs[key] = float(value)
    for key in _MODE_COMPLEX_KEYS:
        if key in entries:
            kwargs[key] = _complex_pair(entries[key], key)
    return ModeCovariance(**kwargs)


def state_to_dict(state) -> dict:
    """Serialize a state into the JSON envelope (complex as [re, im])."""
    if isinstance(state, QuadCovariance):
        return {
            "format": "quad",
            "entries": [float(x) for x in state.entries.reshape(-1)],
        }
    if isinstance(state, ModeCovariance):
        return {
            "format": "mode",
            "entries": {
                "n1": float(state.n1),
                "n2": float(state.n2),
                "m1": [state.m1.real, state.m1.imag],
                "m2": [state.m2.real, state.m2.imag],
                "ms": [state.ms.real, state.ms.imag],
                "mc": [state.mc.real, state.mc.imag],
            },
        }
    raise TypeError(f"cannot serialize {type(state).__name__} as a state")


def load_state(path) -> QuadCovariance | ModeCovariance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read state file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"state file {path} is not valid JSON: {exc}") from exc
    return state_from_dict(data)


def save_state(state, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh, indent=2, sort_keys=True)
        fh.write("\n")
