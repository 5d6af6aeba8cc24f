"""Distribution evolution and convergence-rate measurement.

The transition matrix never exists here.  One evolution step is the exact
two-term recurrence (nu P)_j = nu_1 p_j + nu_{j+1}; everything else in the
module is bookkeeping around iterating it: mass that would land beyond the
stored prefix is moved into a conservative ``tail_mass`` term that is
carried through subsequent steps and reported as the uncertainty of every
curve value.

Rate curves pair a strictly increasing integer grid with values (and,
where truncation matters, with reported bounds).  Fits are ordinary least
squares on log n versus log |value|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DivergentPairing,
    InfiniteDegree,
    NotNullRecurrent,
    NotPositiveRecurrent,
    PreconditionViolated,
    TruncationTooSmall,
    ZeroValueInWindow,
)
from .measures import Observable, SignedDistribution, point_mass

__all__ = [
    "RateCurve",
    "RateFit",
    "step",
    "renewal_sequence",
    "distance_curve",
    "correlation_curve",
    "deviation_tail_ratio",
    "rate_fit",
    "correlation_constant",
    "null_recurrent_ratio",
    "nonuniformity_probe",
    "log_grid",
]


@dataclass(frozen=True)
class RateCurve:
    """Values a_n on a strictly increasing integer grid.

    ``bounds`` reports the truncation uncertainty of each value where the
    producing operation tracks one, and is None for exact curves.
    """

    n_grid: np.ndarray
    values: np.ndarray
    bounds: np.ndarray | None = None

    def __post_init__(self):
        g = np.asarray(self.n_grid, dtype=int)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.size == 0 or g.size != v.size:
            raise PreconditionViolated("grid and values must be matching vectors")
        if np.any(np.diff(g) <= 0):
            raise PreconditionViolated("grid must be strictly increasing")
        if np.any(g < 0):
            raise PreconditionViolated("grid entries must be nonnegative")
        if not np.all(np.isfinite(v)):
            raise PreconditionViolated("curve values must be finite")
        object.__setattr__(self, "n_grid", g)
        object.__setattr__(self, "values", v)
        g.flags.writeable = False
        v.flags.writeable = False
        if self.bounds is not None:
            b = np.asarray(self.bounds, dtype=float)
            if b.shape != v.shape:
                raise PreconditionViolated("bounds must match values")
            object.__setattr__(self, "bounds", b)
            b.flags.writeable = False

    def at(self, n: int) -> float:
        idx = np.searchsorted(self.n_grid, n)
        if idx >= self.n_grid.size or self.n_grid[idx] != n:
            raise KeyError(f"n = {n} not on the curve grid")
        return float(self.values[idx])


@dataclass(frozen=True)
class RateFit:
    """Least-squares power-law fit ``|a_n| ~ exp(intercept) * n^exponent``."""

    exponent: float
    intercept: float
    window: tuple
    rms_residual: float


def log_grid(lo: int, hi: int, count: int = 30) -> np.ndarray:
    """Strictly increasing integer grid, roughly log-uniform on [lo, hi]."""
    if not 1 <= lo <= hi:
        raise PreconditionViolated("need 1 <= lo <= hi")
    raw = np.logspace(math.log10(lo), math.log10(hi), count)
    return np.unique(np.round(raw).astype(int))


# ----------------------------------------------------------------------
# the elementary step and its iteration
# ----------------------------------------------------------------------

def _require_positive_recurrent(chain):
    if not chain.positive_recurrent:
        raise NotPositiveRecurrent(
            "operation compares against the stationary law; this chain has none"
        )


def _nu_support(nu: SignedDistribution) -> int:
    """Largest stored index carrying mass; measures that already carry tail
    mass get no support guarantee and rely on the reported bound."""
    if nu.tail_mass != 0.0:
        return 0
    nz = np.nonzero(nu.weights)[0]
    return int(nz[-1]) if nz.size else 0


def _check_horizon(chain, nu: SignedDistribution, n_max: int):
    need = 2 * n_max + _nu_support(nu)
    if chain.truncation < need:
        raise TruncationTooSmall(
            f"horizon {n_max} needs truncation >= {need}, chain stores {chain.truncation}"
        )


def _padded_weights(chain, nu: SignedDistribution) -> np.ndarray:
    n = chain.truncation
    if nu.size > n:
        raise TruncationTooSmall(
            f"measure stores {nu.size} states, chain only {n}"
        )
    w = np.zeros(n + 1)
    w[: nu.size + 1] = nu.weights
    return w


def _step_inplace(chain, w: np.ndarray, out: np.ndarray, tail_mass: float) -> float:
    """One exact evolution step from ``w`` into ``out``; returns the updated
    tail mass.  Entry j of the result is nu_1 p_j + nu_{j+1}; the unknown
    inflow from state N+1 is what the tail term accounts for."""
    nu1 = w[1]
    n = w.size - 1
    out[0] = 0.0
    out[1:n] = w[2 : n + 1]
    out[n] = 0.0
    if nu1 != 0.0:
        out[1:] += nu1 * chain.p[1:]
        tail_mass += nu1 * chain.d[n]
    return tail_mass


def step(chain, nu: SignedDistribution) -> SignedDistribution:
    """One evolution step of a signed distribution.

    The result keeps the chain's full prefix length.  Mass sent beyond the
    prefix joins ``tail_mass``; the declared tail family is inherited.
    """
    w = _padded_weights(chain, nu)
    out = np.empty_like(w)
    tail = _step_inplace(chain, w, out, nu.tail_mass)
    return SignedDistribution(out, tail_mass=tail, tail=nu.tail)


def _evolved_snapshots(chain, nu: SignedDistribution, n_grid: np.ndarray):
    """Iterate the step, yielding (n, weights, tail_mass) at each grid n."""
    w = _padded_weights(chain, nu)
    buf = np.empty_like(w)
    tail = nu.tail_mass
    current = 0
    for n in n_grid:
        while current < n:
            tail = _step_inplace(chain, w, buf, tail)
            w, buf = buf, w
            current += 1
        yield n, w, tail


# ----------------------------------------------------------------------
# renewal recursion
# ----------------------------------------------------------------------

def renewal_sequence(chain, n_max: int) -> RateCurve:
    """The return-probability sequence e_n starting from e_0 = 1.

    Exact quadratic-time recursion e_n = sum_{k<=n} p_k e_{n-k}.  For
    positive-recurrent chains e_n approaches 1/m1.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise PreconditionViolated("need n_max >= 1")
    if n_max > chain.truncation:
        raise TruncationTooSmall(
            f"recursion to {n_max} needs return probabilities past the stored prefix"
        )
    e = np.empty(n_max + 1)
    e[0] = 1.0
    p = chain.p
    for n in range(1, n_max + 1):
        e[n] = np.dot(p[1 : n + 1], e[n - 1 :: -1])
    return RateCurve(np.arange(n_max + 1), e)


# ----------------------------------------------------------------------
# distance and correlation curves
# ----------------------------------------------------------------------

def _as_grid(n_grid) -> np.ndarray:
    g = np.asarray(n_grid, dtype=int)
    if g.ndim != 1 or g.size == 0 or np.any(np.diff(g) <= 0) or g[0] < 0:
        raise PreconditionViolated("n_grid must be strictly increasing and nonnegative")
    return g


def distance_curve(chain, nu: SignedDistribution, n_grid) -> RateCurve:
    """Total-variation-style l1 distance ``||nu P^n - pi||_1`` on a grid.

    The value sums the stored prefix exactly and adds the analytic
    stationary mass beyond the prefix; the reported bound is the evolved
    measure's unaccounted tail mass, a rigorous two-sided error on the
    value.
    """
    _require_positive_recurrent(chain)
    g = _as_grid(n_grid)
    _check_horizon(chain, nu, int(g[-1]))
    n = chain.truncation
    pi_tail = chain.stationary_mass_beyond(n)
    values = np.empty(g.size)
    bounds = np.empty(g.size)
    for k, (m, w, tail) in enumerate(_evolved_snapshots(chain, nu, g)):
        values[k] = np.abs(w[1:] - chain.pi[1:]).sum() + pi_tail
        bounds[k] = abs(tail)
    return RateCurve(g, values, bounds)


def _padded_observable(chain, u: Observable) -> np.ndarray:
    n = chain.truncation
    vals = np.full(n + 1, u.limit)
    k = min(u.size, n)
    vals[: k + 1] = u.values[: k + 1]
    vals[0] = 0.0
    return vals


def correlation_curve(chain, nu: SignedDistribution, u: Observable, n_grid) -> RateCurve:
    """Pairing ``(nu P^n - pi) . u`` on a grid.

    Exact on the prefix; the constant continuation of ``u`` lets the two
    tail masses pair exactly, so the reported bound is the tail mass times
    the oscillation of ``u`` past the point lost mass can reach.
    """
    _require_positive_recurrent(chain)
    g = _as_grid(n_grid)
    _check_horizon(chain, nu, int(g[-1]))
    n = chain.truncation
    uvals = _padded_observable(chain, u)
    pi_tail = chain.stationary_mass_beyond(n)
    # mass lost at step k can descend to state N - (n_max - k) at worst,
    # so only oscillation of u beyond that point contributes uncertainty
    reach = n - int(g[-1])
    osc = float(np.max(np.abs(uvals[max(reach, 1) :] - u.limit), initial=0.0))
    values = np.empty(g.size)
    bounds = np.empty(g.size)
    for k, (m, w, tail) in enumerate(_evolved_snapshots(chain, nu, g)):
        values[k] = float(np.dot(w[1:] - chain.pi[1:], uvals[1:])) + u.limit * (
            tail - pi_tail
        )
        bounds[k] = abs(tail) * osc
    return RateCurve(g, values, bounds)


# ----------------------------------------------------------------------
# asymptotic-ratio curves
# ----------------------------------------------------------------------

def deviation_tail_ratio(chain, n_grid) -> RateCurve:
    """Sharp deviation asymptotics: m1^2 (e_n - pi_1) / E_n with
    E_n = sum_{l > n} d_l; the ratio approaches 1 for chains of finite
    positive degree.

    Raises
    ------
    InfiniteDegree
        For geometric or finite laws, where the deviation vanishes at
        super-polynomial speed and the ratio is degenerate.
    """
    if math.isinf(chain.ergodic_degree):
        raise InfiniteDegree("deviation-to-tail ratio needs a finite ergodic degree")
    if chain.ergodic_degree <= 0.0:
        raise NotPositiveRecurrent("ratio compares against pi_1, need degree > 0")
    _require_positive_recurrent(chain)
    g = _as_grid(n_grid)
    if g[0] < 1:
        raise PreconditionViolated("ratio is defined for n >= 1")
    e = renewal_sequence(chain, int(g[-1]))
    ratios = (
        chain.m1 ** 2
        * (e.values[g] - chain.pi1)
        / chain.d_tail[g]
    )
    return RateCurve(g, ratios)


def rate_fit(curve: RateCurve, window) -> RateFit:
    """Least-squares fit of log |a_n| against log n over a grid window.

    Raises
    ------
    ZeroValueInWindow
        If any value in the window vanishes exactly, making the log fit
        meaningless.
    """
    lo, hi = int(window[0]), int(window[1])
    mask = (curve.n_grid >= lo) & (curve.n_grid <= hi)
    if mask.sum() < 2:
        raise PreconditionViolated(f"window [{lo}, {hi}] holds fewer than two grid points")
    n = curve.n_grid[mask].astype(float)
    a = np.abs(curve.values[mask])
    if np.any(a == 0.0):
        raise ZeroValueInWindow("curve vanishes inside the fit window")
    if n[0] < 1:
        raise PreconditionViolated("fit window must start at n >= 1")
    x = np.log(n)
    y = np.log(a)
    coeffs = np.polynomial.polynomial.polyfit(x, y, 1)
    intercept, exponent = float(coeffs[0]), float(coeffs[1])
    fitted = intercept + exponent * x
    rms = float(np.sqrt(np.mean((y - fitted) ** 2)))
    return RateFit(exponent=exponent, intercept=intercept, window=(lo, hi), rms_residual=rms)


def _check_nu_negligible(chain, nu: SignedDistribution):
    """The sharp-constant asymptotics need nu_i = o(pi_i): compactly
    supported measures qualify, as do declared tails strictly lighter
    than the stationary one."""
    decl = nu.tail
    if nu.tail_mass == 0.0 and (decl is None or decl.kind == "finite"):
        return
    fam = chain.law.tail_family()
    if fam.kind == "power" and decl is not None:
        if decl.kind == "geometric":
            return
        if decl.kind == "power" and decl.exponent > fam.exponent - 1.0:
            return
    raise PreconditionViolated(
        "initial law must be negligible against pi (compact support or a "
        "strictly lighter declared tail); cancellations otherwise change the rate"
    )


def correlation_constant(chain, nu: SignedDistribution, u: Observable, n_grid):
    """Scaled correlation curve C_n and its predicted limit.

    C_n = ((nu P^n - pi) . u) * n^d / L(n) with L(n) the law's slowly
    varying tail factor (amplitude times the log power); the prediction is

        C = (pi . u)(nu . 1) / (d (d+1) m1).

    Returns ``(curve, predicted)``.

    Raises
    ------
    PreconditionViolated
        If ``u`` does not vanish at infinity, ``nu`` is not negligible
        against pi, or the law declares no tail amplitude.
    InfiniteDegree
        For geometric or finite laws (the rate is not polynomial).
    """
    if math.isinf(chain.ergodic_degree):
        raise InfiniteDegree("polynomial scaling needs a finite ergodic degree")
    _require_positive_recurrent(chain)
    if u.limit != 0.0:
        raise PreconditionViolated("observable must vanish at infinity (u_inf = 0)")
    _check_nu_negligible(chain, nu)
    fam = chain.law.tail_family()
    if fam.kind != "power" or fam.amplitude is None:
        raise PreconditionViolated("law declares no power-tail amplitude to scale by")
    d = chain.ergodic_degree
    g = _as_grid(n_grid)
    if g[0] < 1:
        raise PreconditionViolated("scaling is defined for n >= 1")
    corr = correlation_curve(chain, nu, u, g)
    ns = g.astype(float)
    slow = fam.amplitude * np.log(ns + 1.0) ** fam.log_power
    curve = RateCurve(g, corr.values * ns ** d / slow, None if corr.bounds is None
                      else corr.bounds * ns ** d / slow)
    uvals = _padded_observable(chain, u)
    pi_dot_u = float(np.dot(chain.pi[1:], uvals[1:]))
    predicted = pi_dot_u * nu.total_mass / (d * (d + 1.0) * chain.m1)
    return curve, predicted


def null_recurrent_ratio(chain, nu: SignedDistribution, u: Observable, n_grid) -> RateCurve:
    """Ratio of ``nu P^n . u`` to its predicted null-recurrent asymptote
    ``(nu . 1)(u . v) e_n`` with v_j = d_{j-1} the invariant vector.

    Both routes use the same evolution arithmetic, so for nu = delta_1 and
    u = indicator(1) the ratio is exactly one at every n.

    Raises
    ------
    NotNullRecurrent
        If the chain has a stationary law (the asymptote is a
        null-recurrent statement).
    DivergentPairing
        If ``u . v`` diverges under the declared tails (u_inf != 0).
    """
    if chain.positive_recurrent:
        raise NotNullRecurrent("chain is positive recurrent; use distance or correlation curves")
    if u.limit != 0.0:
        raise DivergentPairing(
            "u pairs with the invariant vector v_j = d_{j-1}, whose sum diverges; "
            "u must vanish at infinity"
        )
    g = _as_grid(n_grid)
    _check_horizon(chain, nu, int(g[-1]))
    uvals = _padded_observable(chain, u)
    u_dot_v = float(np.dot(uvals[1:], chain.d[:-1]))
    scale = nu.total_mass * u_dot_v
    if scale == 0.0:
        raise DivergentPairing("(nu . 1)(u . v) vanishes; ratio undefined")
    numer = np.empty(g.size)
    for k, (m, w, tail) in enumerate(_evolved_snapshots(chain, nu, g)):
        numer[k] = np.dot(w[1:], uvals[1:])
    denom = np.empty(g.size)
    for k, (m, w, tail) in enumerate(_evolved_snapshots(chain, point_mass(1), g)):
        denom[k] = np.dot(w[1:], uvals[1:])
    return RateCurve(g, numer / (scale * denom))


def nonuniformity_probe(chain, i_list, n: int) -> dict:
    """Distance to stationarity after ``n`` steps started from each point
    mass in ``i_list``, exhibiting the lack of a uniform-in-state rate.

    States beyond the horizon are exact by pure descent:
    ``delta_i P^n = delta_{i-n}`` gives distance ``2 (1 - pi_{i-n})``.
    """
    _require_positive_recurrent(chain)
    n = int(n)
    if n < 0:
        raise PreconditionViolated("need n >= 0")
    out = {}
    for i in i_list:
        i = int(i)
        if i < 1 or i > chain.truncation:
            raise PreconditionViolated(f"state {i} outside the stored prefix")
        if i > n:
            out[i] = 2.0 * (1.0 - chain.pi[i - n])
        elif n == 0:
            out[i] = 2.0 * (1.0 - chain.pi[i])
        else:
            curve = distance_curve(chain, point_mass(i), [n])
            out[i] = float(curve.values[0])
    return out
