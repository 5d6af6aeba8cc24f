"""JSON experiment descriptors: loading, validation, object construction.

A descriptor is a plain JSON object.  Every command shares the chain block

    {"chain": {"law": {"type": "zeta", "degree": 1.0}, "truncation": 20000}}

and adds its own parameters (grids, seeds, windows, tolerances).  Law types:

    {"type": "geometric", "q": 0.5}
    {"type": "zeta", "degree": 1.0, "log_power": 0.0}
    {"type": "finite", "probs": [0.5, 0.5]}
    {"type": "custom", "probs": [...], "tail_exponent": 3.0,
     "tail_log_power": 0.0}

Initial measures: {"kind": "point", "state": 1}, {"kind": "stationary"},
or {"kind": "weights", "weights": [...], "tail_mass": 0.0}.  Observables:
{"kind": "indicator", "states": [1], "size": 400}, {"kind": "ones",
"size": 400}, or {"kind": "values", "values": [...], "limit": 0.0}.

Validation is strict: unknown keys anywhere raise :class:`UnknownConfigKey`
with the offending dotted path, before any computation starts.
"""

from __future__ import annotations

import hashlib
import json

from .chain import CustomLaw, FiniteLaw, GeometricLaw, ZetaTailLaw, build_chain
from .errors import ConfigError, UnknownConfigKey
from .measures import from_weights, indicator, ones, point_mass, stationary
from .measures import Observable

__all__ = [
    "load_config",
    "check_keys",
    "config_hash",
    "chain_from_config",
    "measure_from_config",
    "observable_from_config",
    "grid_from_config",
    "require",
]


def load_config(path) -> dict:
    """Read a JSON descriptor; all failures surface as config errors."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def check_keys(d: dict, allowed, path: str = "") -> None:
    """Reject keys outside ``allowed`` (a name -> nested-allowed mapping,
    or None for leaves validated elsewhere)."""
    for key, value in d.items():
        here = f"{path}.{key}" if path else key
        if key not in allowed:
            raise UnknownConfigKey(
                f"unknown config key {here!r}; allowed here: {sorted(allowed)}"
            )
        sub = allowed[key]
        if isinstance(sub, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {here!r} must be an object")
            check_keys(value, sub, here)


def require(cfg: dict, key: str, kind=None, path: str = ""):
    here = f"{path}.{key}" if path else key
    if key not in cfg:
        raise ConfigError(f"missing required config key {here!r}")
    value = cfg[key]
    if kind is not None and not isinstance(value, kind):
        names = kind if isinstance(kind, type) else kind[0]
        raise ConfigError(f"config key {here!r} must be of type {names.__name__}")
    return value


def config_hash(cfg: dict) -> str:
    """Stable short hash of a descriptor, for output sidecars."""
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


#: keys allowed in the shared chain block
CHAIN_KEYS = {"law": None, "truncation": None}
LAW_KEYS = {
    "geometric": {"type", "q"},
    "zeta": {"type", "degree", "log_power"},
    "finite": {"type", "probs"},
    "custom": {"type", "probs", "tail_exponent", "tail_log_power"},
}


def chain_from_config(cfg: dict, truncation_override=None):
    block = require(cfg, "chain", dict)
    check_keys(block, CHAIN_KEYS, "chain")
    law_cfg = require(block, "law", dict, "chain")
    kind = require(law_cfg, "type", str, "chain.law")
    if kind not in LAW_KEYS:
        raise ConfigError(
            f"unknown law type {kind!r}; known: {sorted(LAW_KEYS)}"
        )
    extra = set(law_cfg) - LAW_KEYS[kind]
    if extra:
        raise UnknownConfigKey(
            f"unknown keys {sorted(extra)} for law type {kind!r}"
        )
    if kind == "geometric":
        law = GeometricLaw(require(law_cfg, "q", (int, float), "chain.law"))
    elif kind == "zeta":
        law = ZetaTailLaw(
            require(law_cfg, "degree", (int, float), "chain.law"),
            float(law_cfg.get("log_power", 0.0)),
        )
    elif kind == "finite":
        law = FiniteLaw(require(law_cfg, "probs", list, "chain.law"))
    else:
        law = CustomLaw(
            require(law_cfg, "probs", list, "chain.law"),
            tail_exponent=float(law_cfg.get("tail_exponent", float("inf"))),
            tail_log_power=float(law_cfg.get("tail_log_power", 0.0)),
        )
    truncation = require(block, "truncation", int, "chain")
    if truncation_override is not None:
        truncation = int(truncation_override)
    return build_chain(law, truncation)


MEASURE_KEYS = {
    "point": {"kind", "state"},
    "stationary": {"kind", "size"},
    "weights": {"kind", "weights", "tail_mass"},
}


def measure_from_config(cfg: dict, chain, size: int, path: str = "nu"):
    if not isinstance(cfg, dict):
        raise ConfigError(f"config key {path!r} must be an object")
    kind = require(cfg, "kind", str, path)
    if kind not in MEASURE_KEYS:
        raise ConfigError(f"unknown measure kind {kind!r} at {path!r}")
    extra = set(cfg) - MEASURE_KEYS[kind]
    if extra:
        raise UnknownConfigKey(f"unknown keys {sorted(extra)} at {path!r}")
    if kind == "point":
        return point_mass(require(cfg, "state", int, path), size=size)
    if kind == "stationary":
        return stationary(chain, size=int(cfg.get("size", size)))
    weights = [float(x) for x in require(cfg, "weights", list, path)]
    return from_weights(weights, tail_mass=float(cfg.get("tail_mass", 0.0)))


OBSERVABLE_KEYS = {
    "indicator": {"kind", "states", "size"},
    "ones": {"kind", "size"},
    "values": {"kind", "values", "limit"},
}


def observable_from_config(cfg: dict, path: str = "u") -> Observable:
    if not isinstance(cfg, dict):
        raise ConfigError(f"config key {path!r} must be an object")
    kind = require(cfg, "kind", str, path)
    if kind not in OBSERVABLE_KEYS:
        raise ConfigError(f"unknown observable kind {kind!r} at {path!r}")
    extra = set(cfg) - OBSERVABLE_KEYS[kind]
    if extra:
        raise UnknownConfigKey(f"unknown keys {sorted(extra)} at {path!r}")
    if kind == "indicator":
        return indicator(
            require(cfg, "states", list, path), require(cfg, "size", int, path)
        )
    if kind == "ones":
        return ones(require(cfg, "size", int, path))
    values = [0.0] + [float(x) for x in require(cfg, "values", list, path)]
    return Observable(values, limit=float(cfg.get("limit", 0.0)))


GRID_KEYS = {"lo": None, "hi": None, "count": None, "points": None}


def grid_from_config(cfg: dict, path: str = "grid"):
    """A strictly increasing integer grid: either explicit ``points`` or a
    log-spaced ``lo``/``hi``/``count`` block."""
    from .evolve import log_grid

    if not isinstance(cfg, dict):
        raise ConfigError(f"config key {path!r} must be an object")
    check_keys(cfg, GRID_KEYS, path)
    if "points" in cfg:
        if set(cfg) != {"points"}:
            raise ConfigError(f"{path!r} takes either points or lo/hi/count")
        pts = [int(v) for v in cfg["points"]]
        if any(b <= a for a, b in zip(pts, pts[1:])) or not pts:
            raise ConfigError(f"{path}.points must be strictly increasing")
        return pts
    lo = require(cfg, "lo", int, path)
    hi = require(cfg, "hi", int, path)
    count = int(cfg.get("count", 30))
    return [int(v) for v in log_grid(lo, hi, count)]
