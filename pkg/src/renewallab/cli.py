"""Command-line front end.

Every command reads a JSON descriptor (see :mod:`renewallab.config`),
computes one artifact set, and writes it under ``--out``:

* ``summary.json`` with the headline numbers, sorted keys, no timestamps;
* one CSV per curve or table, each with a header row and a
  ``<name>.csv.meta.json`` sidecar recording the config hash, the seed and
  the tool version.

Re-running a command with the same config and seed reproduces every output
byte for byte; floats are written with full round-trip precision and
nothing time- or host-dependent is recorded.  Writes go through a
temporary file in the target directory followed by an atomic rename.

Exit codes: 0 success, 2 malformed config or usage, 3 mathematical
precondition violated (for example ``rates lemma2`` on a geometric chain,
whose deviation decays faster than any power), 4 stored prefix too short.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .config import (
    CHAIN_KEYS,
    GRID_KEYS,
    chain_from_config,
    check_keys,
    config_hash,
    grid_from_config,
    load_config,
    measure_from_config,
    observable_from_config,
    require,
)
from .errors import ConfigError, PreconditionError, TruncationError
from .evolve import (
    correlation_constant,
    correlation_curve,
    deviation_tail_ratio,
    distance_curve,
    null_recurrent_ratio,
    rate_fit,
)
from .maps import (
    build_map,
    entrance_tail,
    kac_check,
    map_states,
    markov_frequency_check,
    mc_correlation,
    sample_states,
)
from .series import convolution_power_probe, kaluza_check, zero_diagnostic
from .spectral import disk_scan, factorization_residual, gf_evaluate

__all__ = ["main"]


# ----------------------------------------------------------------------
# Deterministic writers
# ----------------------------------------------------------------------

def _atomic_bytes(path: str, data: bytes) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _plain(x):
    """Recursively coerce numpy scalars/arrays and complex numbers into
    JSON-representable values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        # keep summaries strict JSON: no Infinity/NaN literals
        return x if np.isfinite(x) else repr(x)
    if isinstance(x, complex):
        return {"re": _plain(x.real), "im": _plain(x.imag)}
    return x


def _write_json(path: str, obj) -> None:
    text = json.dumps(_plain(obj), sort_keys=True, indent=2)
    _atomic_bytes(path, (text + "\n").encode())


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


class Ctx:
    """Per-invocation state: parsed config, resolved seed, output sink."""

    def __init__(self, command, cfg, out, seed, truncation, quiet):
        self.command = command
        self.cfg = cfg
        self.out = out
        self.seed = seed
        self.truncation = truncation
        self.quiet = quiet
        self.sha = config_hash(cfg)
        self.artifacts = []

    def chain(self):
        return chain_from_config(self.cfg, self.truncation)

    def say(self, line: str) -> None:
        if not self.quiet:
            print(line)

    def _meta(self, columns) -> dict:
        return {
            "columns": list(columns),
            "command": self.command,
            "config_sha256": self.sha,
            "seed": self.seed,
            "tool_version": __version__,
        }

    def write_table(self, name: str, header, rows) -> None:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_cell(v) for v in row))
        path = os.path.join(self.out, name)
        _atomic_bytes(path, ("\n".join(lines) + "\n").encode())
        _write_json(path + ".meta.json", self._meta(header))
        self.artifacts.append(name)
        self.say(f"wrote {path}")

    def write_curve(self, name: str, curve) -> None:
        bounds = curve.bounds
        if bounds is None:
            bounds = np.zeros(curve.values.size)
        rows = zip(curve.n_grid.tolist(), curve.values.tolist(), bounds.tolist())
        self.write_table(name, ("n", "value", "tail_bound"), rows)


# ----------------------------------------------------------------------
# Small config helpers
# ----------------------------------------------------------------------

def _complex_points(cfg: dict, key: str):
    raw = require(cfg, key, list)
    if not raw:
        raise ConfigError(f"config key {key!r} must be a nonempty list")
    out = []
    for k, item in enumerate(raw):
        if isinstance(item, (int, float)):
            out.append(complex(item))
        elif isinstance(item, list) and len(item) == 2:
            out.append(complex(float(item[0]), float(item[1])))
        else:
            raise ConfigError(
                f"{key}[{k}] must be a real number or an [re, im] pair"
            )
    return out


def _window(cfg: dict, key: str):
    if key not in cfg or cfg[key] is None:
        return None
    raw = cfg[key]
    if not (isinstance(raw, list) and len(raw) == 2 and raw[0] < raw[1]):
        raise ConfigError(f"config key {key!r} must be [lo, hi] with lo < hi")
    return (int(raw[0]), int(raw[1]))


def _fit_dict(fit):
    if fit is None:
        return None
    return {
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "window": list(fit.window),
        "rms_residual": fit.rms_residual,
    }


def _choice(cfg: dict, key: str, default: str, allowed) -> str:
    value = cfg.get(key, default)
    if value not in allowed:
        raise ConfigError(f"config key {key!r} must be one of {sorted(allowed)}")
    return value


# ----------------------------------------------------------------------
# Command handlers.  Each returns the ``results`` block of summary.json.
# ----------------------------------------------------------------------

def cmd_chain_info(ctx: Ctx) -> dict:
    chain = ctx.chain()
    info = chain.describe()
    info["degree"] = chain.ergodic_degree
    info["positive_recurrent"] = chain.positive_recurrent
    ctx.say(
        f"{chain.classification} chain, m1={chain.m1!r}, pi1={chain.pi1!r}"
    )
    return info


def cmd_rates_distance(ctx: Ctx) -> dict:
    chain = ctx.chain()
    nu = measure_from_config(require(ctx.cfg, "nu", dict), chain, chain.truncation)
    grid = grid_from_config(require(ctx.cfg, "grid", dict))
    curve = distance_curve(chain, nu, grid)
    ctx.write_curve("rates_distance.csv", curve)
    fit = None
    window = _window(ctx.cfg, "fit_window")
    if window is not None:
        fit = rate_fit(curve, window)
    results = {
        "final_n": int(curve.n_grid[-1]),
        "final_value": float(curve.values[-1]),
        "fit": _fit_dict(fit),
    }
    ctx.say(f"distance at n={results['final_n']}: {results['final_value']!r}")
    return results


def cmd_rates_correlation(ctx: Ctx) -> dict:
    chain = ctx.chain()
    nu = measure_from_config(require(ctx.cfg, "nu", dict), chain, chain.truncation)
    u = observable_from_config(require(ctx.cfg, "u", dict), "u")
    grid = grid_from_config(require(ctx.cfg, "grid", dict))
    curve = correlation_curve(chain, nu, u, grid)
    ctx.write_curve("rates_correlation.csv", curve)
    fit = None
    window = _window(ctx.cfg, "fit_window")
    if window is not None:
        fit = rate_fit(curve, window)
    results = {
        "final_n": int(curve.n_grid[-1]),
        "final_value": float(curve.values[-1]),
        "fit": _fit_dict(fit),
    }
    ctx.say(f"correlation at n={results['final_n']}: {results['final_value']!r}")
    return results


def cmd_rates_lemma2(ctx: Ctx) -> dict:
    chain = ctx.chain()
    grid = grid_from_config(require(ctx.cfg, "grid", dict))
    band = ctx.cfg.get("band", [0.9, 1.1])
    if not (isinstance(band, list) and len(band) == 2 and band[0] < band[1]):
        raise ConfigError("config key 'band' must be [lo, hi] with lo < hi")
    curve = deviation_tail_ratio(chain, grid)
    ctx.write_curve("rates_lemma2.csv", curve)
    final = float(curve.values[-1])
    results = {
        "final_n": int(curve.n_grid[-1]),
        "final_ratio": final,
        "band": [float(band[0]), float(band[1])],
        "within_band": bool(band[0] <= final <= band[1]),
    }
    ctx.say(f"deviation/tail ratio at n={results['final_n']}: {final!r}")
    return results


def cmd_rates_constant(ctx: Ctx) -> dict:
    chain = ctx.chain()
    nu = measure_from_config(require(ctx.cfg, "nu", dict), chain, chain.truncation)
    u = observable_from_config(require(ctx.cfg, "u", dict), "u")
    grid = grid_from_config(require(ctx.cfg, "grid", dict))
    rel_tol = float(ctx.cfg.get("rel_tolerance", 0.2))
    curve, predicted = correlation_constant(chain, nu, u, grid)
    ctx.write_curve("rates_constant.csv", curve)
    final = float(curve.values[-1])
    gap = abs(final - predicted) / abs(predicted)
    results = {
        "final_n": int(curve.n_grid[-1]),
        "final_value": final,
        "predicted": float(predicted),
        "relative_gap": float(gap),
        "rel_tolerance": rel_tol,
        "pass": bool(gap <= rel_tol),
    }
    ctx.say(f"scaled correlation {final!r} vs predicted {predicted!r}")
    return results


def cmd_rates_null(ctx: Ctx) -> dict:
    chain = ctx.chain()
    nu = measure_from_config(require(ctx.cfg, "nu", dict), chain, chain.truncation)
    u = observable_from_config(require(ctx.cfg, "u", dict), "u")
    grid = grid_from_config(require(ctx.cfg, "grid", dict))
    curve = null_recurrent_ratio(chain, nu, u, grid)
    ctx.write_curve("rates_null.csv", curve)
    results = {
        "final_n": int(curve.n_grid[-1]),
        "final_ratio": float(curve.values[-1]),
    }
    ctx.say(f"null-recurrent ratio at n={results['final_n']}: "
            f"{results['final_ratio']!r}")
    return results


def cmd_spectral_factorize(ctx: Ctx) -> dict:
    chain = ctx.chain()
    dimension = int(ctx.cfg.get("dimension", 200))
    tolerance = float(ctx.cfg.get("tolerance", 1e-12))
    points = _complex_points(ctx.cfg, "z_points")
    rows = []
    worst = 0.0
    for z in points:
        res = factorization_residual(chain, z, dimension)
        worst = max(worst, res)
        rows.append((z.real, z.imag, res))
    ctx.write_table("spectral_factorize.csv", ("re_z", "im_z", "residual"), rows)
    results = {
        "dimension": dimension,
        "max_residual": worst,
        "tolerance": tolerance,
        "pass": bool(worst <= tolerance),
    }
    ctx.say(f"max factorization residual {worst!r} at N={dimension}")
    return results


def cmd_spectral_eigen(ctx: Ctx) -> dict:
    chain = ctx.chain()
    dimension = int(ctx.cfg.get("dimension", 400))
    lams = _complex_points(ctx.cfg, "lambdas")
    rows = disk_scan(chain, lams, dimension)
    ctx.write_table(
        "spectral_eigen.csv",
        ("re_lambda", "im_lambda", "residual", "l1_partial_norm"),
        rows,
    )
    worst = max(r[2] for r in rows)
    results = {"dimension": dimension, "max_residual": float(worst)}
    ctx.say(f"max interior eigen residual {worst!r} at N={dimension}")
    return results


def cmd_spectral_gf(ctx: Ctx) -> dict:
    chain = ctx.chain()
    i = int(ctx.cfg.get("i", 1))
    j = int(ctx.cfg.get("j", 1))
    points = _complex_points(ctx.cfg, "z_points")
    rows = []
    for z in points:
        p_val, f_val = gf_evaluate(chain, i, j, z)
        p_val, f_val = complex(p_val), complex(f_val)
        rows.append((z.real, z.imag, p_val.real, p_val.imag,
                     f_val.real, f_val.imag))
    ctx.write_table(
        "spectral_gf.csv",
        ("re_z", "im_z", "re_p", "im_p", "re_f", "im_f"),
        rows,
    )
    ctx.say(f"evaluated P_{i}{j} and F_{i}{j} at {len(rows)} points")
    return {"i": i, "j": j, "points": len(rows)}


def _states_for(ctx: Ctx, chain, length: int, burn_in: int, sampler: str):
    if sampler == "chain":
        return sample_states(chain, length, ctx.seed, burn_in)
    return map_states(build_map(chain), length, ctx.seed, burn_in)


def cmd_map_simulate(ctx: Ctx) -> dict:
    chain = ctx.chain()
    length = require(ctx.cfg, "length", int)
    burn_in = int(ctx.cfg.get("burn_in", 10_000))
    sampler = _choice(ctx.cfg, "sampler", "chain", ("chain", "float"))
    i_max = int(ctx.cfg.get("i_max", 10))
    states, censored = _states_for(ctx, chain, length, burn_in, sampler)
    valid = int(np.count_nonzero(states > 0))
    counts = np.bincount(
        states[(states > 0) & (states <= i_max)], minlength=i_max + 1
    )
    exact = (
        chain.pi[1 : i_max + 1]
        if chain.positive_recurrent
        else np.full(i_max, np.nan)
    )
    rows = [
        (s, int(counts[s]), counts[s] / valid, float(exact[s - 1]))
        for s in range(1, i_max + 1)
    ]
    ctx.write_table(
        "map_simulate_occupation.csv",
        ("state", "visits", "frequency", "exact"),
        rows,
    )
    results = {
        "n_steps": int(states.size),
        "valid_steps": valid,
        "censored": int(censored),
        "sampler": sampler,
    }
    ctx.say(f"simulated {states.size} steps, {censored} censored")
    return results


def cmd_map_correlate(ctx: Ctx) -> dict:
    chain = ctx.chain()
    u = observable_from_config(require(ctx.cfg, "u", dict), "u")
    v = observable_from_config(require(ctx.cfg, "v", dict), "v")
    lags = grid_from_config(require(ctx.cfg, "lags", dict), "lags")
    orbit_length = require(ctx.cfg, "orbit_length", int)
    burn_in = int(ctx.cfg.get("burn_in", 10_000))
    sampler = _choice(ctx.cfg, "sampler", "chain", ("chain", "float"))
    streams = int(ctx.cfg.get("streams", 1))
    estimates = mc_correlation(
        build_map(chain), u, v, lags, orbit_length, ctx.seed,
        burn_in=burn_in, sampler=sampler, streams=streams,
    )
    rows = [
        (n, est.mean, est.stderr, est.censored)
        for n, est in sorted(estimates.items())
    ]
    ctx.write_table(
        "map_correlate.csv", ("n", "mean", "stderr", "censored"), rows
    )
    results = {
        "estimates": {
            str(n): {
                "mean": est.mean,
                "stderr": est.stderr,
                "n_samples": est.n_samples,
                "censored": est.censored,
            }
            for n, est in estimates.items()
        },
        "sampler": sampler,
        "streams": streams,
    }
    ctx.say(f"estimated {len(rows)} lags from {orbit_length}-step orbits")
    return results


def cmd_map_entrance(ctx: Ctx) -> dict:
    chain = ctx.chain()
    a = float(require(ctx.cfg, "a", (int, float)))
    n_max = require(ctx.cfg, "n_max", int)
    samples = require(ctx.cfg, "samples", int)
    window = _window(ctx.cfg, "fit_window")
    report = entrance_tail(build_map(chain), a, n_max, samples, ctx.seed,
                           fit_window=window)
    ctx.write_curve("map_entrance.csv", report.curve)
    results = {
        "a_effective": report.a_effective,
        "k": report.k,
        "n_samples": report.n_samples,
        "fit": _fit_dict(report.fit),
    }
    if report.fit is not None:
        ctx.say(f"entrance-tail exponent {report.fit.exponent!r}")
    return results


def cmd_map_kac(ctx: Ctx) -> dict:
    chain = ctx.chain()
    orbit_length = require(ctx.cfg, "orbit_length", int)
    burn_in = int(ctx.cfg.get("burn_in", 10_000))
    sampler = _choice(ctx.cfg, "sampler", "chain", ("chain", "float"))
    tolerance = float(ctx.cfg.get("tolerance", 0.01))
    hist_max = int(ctx.cfg.get("histogram_max", 30))
    report = kac_check(build_map(chain), orbit_length, ctx.seed,
                       burn_in=burn_in, sampler=sampler)
    top = min(report.histogram.size - 1, hist_max)
    rows = [(k, int(report.histogram[k])) for k in range(1, top + 1)]
    ctx.write_table("map_kac_histogram.csv", ("length", "count"), rows)
    gap = abs(report.product - 1.0)
    results = {
        "rho_e": report.rho_e,
        "mean_return": report.mean_return,
        "product": report.product,
        "n_returns": report.n_returns,
        "n_steps": report.n_steps,
        "censored": report.censored,
        "tolerance": tolerance,
        "pass": bool(gap <= tolerance),
    }
    ctx.say(f"occupation*mean_return = {report.product!r}")
    return results


def cmd_map_frequency(ctx: Ctx) -> dict:
    chain = ctx.chain()
    orbit_length = require(ctx.cfg, "orbit_length", int)
    i_max = int(ctx.cfg.get("i_max", 10))
    burn_in = int(ctx.cfg.get("burn_in", 10_000))
    sampler = _choice(ctx.cfg, "sampler", "chain", ("chain", "float"))
    sigma = float(ctx.cfg.get("sigma", 3.0))
    rep = markov_frequency_check(build_map(chain), orbit_length, ctx.seed,
                                 i_max=i_max, burn_in=burn_in, sampler=sampler)
    t_rows = []
    for r in range(i_max):
        for c in range(i_max):
            t_rows.append((
                r + 1, c + 1,
                rep.transition_hat[r, c],
                rep.transition_exact[r, c],
                rep.transition_stderr[r, c],
            ))
    ctx.write_table(
        "map_frequency_transitions.csv",
        ("row", "col", "hat", "exact", "stderr"),
        t_rows,
    )
    o_rows = [
        (s + 1, rep.occupation_hat[s], rep.occupation_exact[s],
         rep.occupation_stderr[s])
        for s in range(i_max)
    ]
    ctx.write_table(
        "map_frequency_occupation.csv",
        ("state", "hat", "exact", "stderr"),
        o_rows,
    )

    def worst(hat, exact, err):
        with np.errstate(invalid="ignore", divide="ignore"):
            dev = np.abs(hat - exact) / np.where(err > 0.0, err, np.nan)
        return 0.0 if np.all(np.isnan(dev)) else float(np.nanmax(dev))

    w_t = worst(rep.transition_hat, rep.transition_exact, rep.transition_stderr)
    w_o = worst(rep.occupation_hat, rep.occupation_exact, rep.occupation_stderr)
    results = {
        "n_steps": rep.n_steps,
        "censored": rep.censored,
        "max_transition_sigma": w_t,
        "max_occupation_sigma": w_o,
        "sigma": sigma,
        "pass": bool(w_t <= sigma and w_o <= sigma),
    }
    ctx.say(f"worst deviation {max(w_t, w_o)!r} standard errors")
    return results


PROBE_KEYS = {
    "convolution": {"probe", "gamma", "n_list"},
    "kaluza": {"probe", "chain"},
    "zeros": {"probe", "chain", "radii", "points", "prefix"},
}


def cmd_series_probe(ctx: Ctx) -> dict:
    require(ctx.cfg, "probe", str)
    probe = _choice(ctx.cfg, "probe", None, tuple(PROBE_KEYS))
    extra = set(ctx.cfg) - PROBE_KEYS[probe]
    if extra:
        raise ConfigError(
            f"unknown keys {sorted(extra)} for probe {probe!r}"
        )
    if probe == "convolution":
        gamma = float(require(ctx.cfg, "gamma", (int, float)))
        n_list = [int(n) for n in require(ctx.cfg, "n_list", list)]
        values = {}
        regime = None
        for n in n_list:
            value, regime = convolution_power_probe(gamma, n)
            values[str(n)] = value
        ctx.say(f"convolution power regime: {regime}")
        return {"gamma": gamma, "regime": regime, "values": values}
    chain = ctx.chain()
    if probe == "kaluza":
        ok = kaluza_check(chain.p[1:])
        ctx.say(f"kaluza (decreasing, log-convex): {ok}")
        return {"kaluza": bool(ok), "law": chain.law.describe()}
    prefix = int(ctx.cfg.get("prefix", min(chain.truncation, 2000)))
    if not 2 <= prefix <= chain.truncation:
        raise ConfigError("'prefix' must lie within the stored prefix")
    den = np.zeros(prefix + 1)
    den[0] = 1.0
    den[1:] = -chain.p[1 : prefix + 1]
    radii = ctx.cfg.get("radii")
    diag = zero_diagnostic(
        den,
        radii=None if radii is None else [float(r) for r in radii],
        points=int(ctx.cfg.get("points", 720)),
    )
    ctx.say(f"min |1 - F(z)| sampled: {diag['min_abs']!r}")
    return diag


# ----------------------------------------------------------------------
# Registry, parser, entry point
# ----------------------------------------------------------------------

_CHAIN = {"chain": dict(CHAIN_KEYS)}
_GRID = dict(GRID_KEYS)

#: command -> (handler, allowed top-level config keys)
REGISTRY = {
    "chain info": (cmd_chain_info, {**_CHAIN}),
    "rates distance": (
        cmd_rates_distance,
        {**_CHAIN, "nu": None, "grid": _GRID, "fit_window": None},
    ),
    "rates correlation": (
        cmd_rates_correlation,
        {**_CHAIN, "nu": None, "u": None, "grid": _GRID, "fit_window": None},
    ),
    "rates lemma2": (
        cmd_rates_lemma2,
        {**_CHAIN, "grid": _GRID, "band": None},
    ),
    "rates constant": (
        cmd_rates_constant,
        {**_CHAIN, "nu": None, "u": None, "grid": _GRID, "rel_tolerance": None},
    ),
    "rates null": (
        cmd_rates_null,
        {**_CHAIN, "nu": None, "u": None, "grid": _GRID},
    ),
    "spectral factorize": (
        cmd_spectral_factorize,
        {**_CHAIN, "dimension": None, "z_points": None, "tolerance": None},
    ),
    "spectral eigen": (
        cmd_spectral_eigen,
        {**_CHAIN, "dimension": None, "lambdas": None},
    ),
    "spectral gf": (
        cmd_spectral_gf,
        {**_CHAIN, "i": None, "j": None, "z_points": None},
    ),
    "map simulate": (
        cmd_map_simulate,
        {**_CHAIN, "length": None, "burn_in": None, "sampler": None,
         "i_max": None, "seed": None},
    ),
    "map correlate": (
        cmd_map_correlate,
        {**_CHAIN, "u": None, "v": None, "lags": _GRID,
         "orbit_length": None, "burn_in": None, "sampler": None,
         "streams": None, "seed": None},
    ),
    "map entrance": (
        cmd_map_entrance,
        {**_CHAIN, "a": None, "n_max": None, "samples": None,
         "fit_window": None, "seed": None},
    ),
    "map kac": (
        cmd_map_kac,
        {**_CHAIN, "orbit_length": None, "burn_in": None, "sampler": None,
         "tolerance": None, "histogram_max": None, "seed": None},
    ),
    "map frequency": (
        cmd_map_frequency,
        {**_CHAIN, "orbit_length": None, "i_max": None, "burn_in": None,
         "sampler": None, "sigma": None, "seed": None},
    ),
    "series probe": (
        cmd_series_probe,
        {"probe": None, "gamma": None, "n_list": None, "chain": dict(CHAIN_KEYS),
         "radii": None, "points": None, "prefix": None},
    ),
}

_SUBCOMMANDS = {
    "chain": ("info",),
    "rates": ("distance", "correlation", "lemma2", "constant", "null"),
    "spectral": ("factorize", "eigen", "gf"),
    "map": ("simulate", "correlate", "entrance", "kac", "frequency"),
    "series": ("probe",),
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True,
                        help="path to the JSON descriptor")
    common.add_argument("--out", default=".",
                        help="output directory (default: current)")
    common.add_argument("--seed", type=int, default=None,
                        help="override the config seed (unsigned 64-bit)")
    common.add_argument("--truncation", type=int, default=None,
                        help="override the chain prefix length")
    common.add_argument("--quiet", action="store_true",
                        help="suppress progress lines on stdout")

    parser = argparse.ArgumentParser(
        prog="renewallab",
        description="Convergence-rate experiments for renewal chains",
    )
    groups = parser.add_subparsers(dest="group", required=True)
    for group, subs in _SUBCOMMANDS.items():
        gp = groups.add_parser(group)
        sp = gp.add_subparsers(dest="sub", required=True)
        for sub in subs:
            sp.add_parser(sub, parents=[common])
    return parser


def _run(args) -> int:
    command = f"{args.group} {args.sub}"
    handler, schema = REGISTRY[command]
    cfg = load_config(args.config)
    check_keys(cfg, schema)
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    os.makedirs(args.out, exist_ok=True)
    ctx = Ctx(command, cfg, args.out, seed, args.truncation, args.quiet)
    results = handler(ctx)
    summary = {
        "command": command,
        "config_sha256": ctx.sha,
        "seed": seed,
        "tool_version": __version__,
        "artifacts": sorted(ctx.artifacts),
        "results": results,
    }
    path = os.path.join(args.out, "summary.json")
    _write_json(path, summary)
    ctx.say(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition violated ({type(exc).__name__}): {exc}",
              file=sys.stderr)
        return 3
    except TruncationError as exc:
        print(f"truncation too small ({type(exc).__name__}): {exc}",
              file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
