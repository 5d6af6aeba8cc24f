"""Piecewise-affine interval maps coded by the renewal chain.

A return law with survival breakpoints 1 = d_0 > d_1 > d_2 > ... defines a
map of [0,1]: the top branch carries [d_1, 1] affinely onto [0,1], and each
deeper branch carries [d_i, d_{i-1}) onto [d_{i-1}, d_{i-2}).  Coding a
point by the partition cell it visits turns orbits into paths of the chain,
so every chain statistic has a map-side Monte Carlo counterpart.

Two samplers produce coded orbits.  The default draws excursion lengths
straight from the return law, which is exact: no float orbit is involved,
so there is no rounding question to argue about.  The float-orbit sampler
iterates the map itself; near 0 the cells shrink below double resolution
(and for dyadic slopes the mantissa drains in about fifty steps), so when
an orbit crosses the resolvable depth it is censored, counted, and the
stream restarts from a fresh invariant-density sample.  Estimators skip
pairs that straddle a censored step.

Randomness comes from the counter-based Philox generator; stream ``s`` of
a run with seed ``seed`` uses key ``seed + s``, so streams are disjoint and
every estimate is reproducible from its reported seed.  Estimators burn in
10^4 steps by default and report batch-mean standard errors over 100
batches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NotPositiveRecurrent,
    PreconditionViolated,
    SymbolCapExceeded,
    TruncationTooSmall,
    ZeroProbabilityBranch,
    ZeroValueInWindow,
)
from .evolve import RateCurve, RateFit, rate_fit

__all__ = [
    "IntermittentMap",
    "McEstimate",
    "KacReport",
    "FrequencyReport",
    "EntranceReport",
    "TransferReport",
    "build_map",
    "apply",
    "encode",
    "orbit_symbols",
    "sample_states",
    "map_states",
    "mc_correlation",
    "kac_check",
    "entrance_tail",
    "markov_frequency_check",
    "invariant_density",
    "pf_check",
]

#: A branch narrower than this cannot be separated in double precision.
DEPTH_RESOLUTION = 1e-14

#: Default number of discarded steps before an estimator starts recording.
BURN_IN = 10_000

#: Default number of batches for batch-mean standard errors.
BATCHES = 100


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) + int(stream)))


def _support_length(chain) -> int:
    """Length of the initial segment where the return law is positive."""
    k = 0
    while k + 1 <= chain.truncation and chain.p[k + 1] > 0.0:
        k += 1
    if np.any(chain.p[k + 1 :] > 0.0):
        raise ZeroProbabilityBranch(
            "return law has a zero inside its support; the branch map is not defined"
        )
    return k


@dataclass(frozen=True)
class IntermittentMap:
    """Piecewise-affine map of [0,1] built from a renewal chain.

    breakpoints : ndarray
        ``d_0 .. d_B`` strictly decreasing; ``d_B`` is 0 exactly when the
        return law has finite support, otherwise it is the deepest cell
        edge separable in double precision.
    slopes : ndarray
        ``slopes[i] = p_i / p_{i-1}`` (entry 0 unused); branch ``i``
        expands by ``1/slopes[i]``.
    symbol_cap : int
        Largest resolvable partition index.
    """

    chain: object
    breakpoints: np.ndarray
    slopes: np.ndarray
    symbol_cap: int
    terminal: bool

    def __post_init__(self):
        self.breakpoints.flags.writeable = False
        self.slopes.flags.writeable = False


def build_map(chain) -> IntermittentMap:
    """Assemble the branch map of a chain.

    Branches stop where cells get narrower than ``DEPTH_RESOLUTION``;
    below that depth points cannot be coded and orbits are censored.
    Branch images are checked against the next cell at build time.
    """
    support = _support_length(chain)
    cap = support
    for i in range(1, support + 1):
        if chain.p[i] < DEPTH_RESOLUTION:
            cap = i - 1
            break
    if cap < 1:
        raise ZeroProbabilityBranch("no resolvable branch")
    terminal = support == cap and chain.d[cap] == 0.0
    bp = chain.d[: cap + 1].copy()
    slopes = np.zeros(cap + 1)
    slopes[1] = chain.p[1]
    slopes[2:] = chain.p[2 : cap + 1] / chain.p[1:cap]
    m = IntermittentMap(chain, bp, slopes, cap, terminal)

    for i in range(2, min(cap, 200) + 1):
        top = np.nextafter(bp[i - 1], 0.0)
        if abs(apply(m, top) - bp[i - 2]) > 1e-12:
            raise PreconditionViolated(
                f"branch {i} image misses the next cell edge; law too irregular"
            )
    return m


def encode(m: IntermittentMap, x: float) -> int:
    """Partition index of ``x``; cell ``i`` is ``[d_i, d_{i-1})`` and the
    top cell includes 1.  Points below the deepest breakpoint of a
    non-terminal map raise :class:`SymbolCapExceeded`."""
    if not 0.0 <= x <= 1.0:
        raise PreconditionViolated("points live in [0, 1]")
    if x == 1.0:
        return 1
    bp = m.breakpoints
    idx = int(np.searchsorted(bp[::-1], x, side="right"))
    sym = bp.size - idx
    if sym > m.symbol_cap:
        raise SymbolCapExceeded(
            f"point {x!r} lies below the resolvable depth {bp[-1]!r}"
        )
    return sym


def apply(m: IntermittentMap, x: float) -> float:
    """One step of the map.

    The branch holding ``x`` is found by binary search; its affine image
    is clamped into the exact target cell so that coded orbits descend
    deterministically with no rounding spill.  The boundary fixed point 0
    maps to 0 when the map has no terminal cell.
    """
    if x == 0.0 and not m.terminal:
        return 0.0
    i = encode(m, x)
    bp = m.breakpoints
    if i == 1:
        y = (x - bp[1]) / m.slopes[1]
        return min(max(y, 0.0), 1.0)
    y = bp[i - 1] + (x - bp[i]) / m.slopes[i]
    hi = np.nextafter(bp[i - 2], 0.0) if i > 2 else 1.0
    return min(max(y, bp[i - 1]), hi)


def orbit_symbols(m: IntermittentMap, x0: float, n: int) -> np.ndarray:
    """Symbols of ``x0, f(x0), ..., f^n(x0)``, length ``n + 1``.

    Symbols obey the descent rule exactly: ``j >= 2`` at one step forces
    ``j - 1`` at the next.  Raises :class:`SymbolCapExceeded` if the orbit
    leaves the resolvable depth.
    """
    if not 0.0 < x0 <= 1.0:
        raise PreconditionViolated("orbit starts in (0, 1]")
    out = np.empty(n + 1, dtype=np.int64)
    x = float(x0)
    out[0] = encode(m, x)
    for t in range(1, n + 1):
        x = apply(m, x)
        out[t] = encode(m, x)
    return out


# ----------------------------------------------------------------------
# coded-orbit samplers
# ----------------------------------------------------------------------

def sample_states(chain, length: int, seed: int, burn_in: int = BURN_IN,
                  stream: int = 0):
    """Exact coded orbit: excursion lengths drawn from the return law.

    Returns ``(states, censored)``.  A draw landing beyond the stored
    prefix (probability = the survival mass at the truncation) appears as
    a single ``-1`` sentinel step and is counted in ``censored``.
    """
    rng = _rng(seed, stream)
    cdf = np.cumsum(chain.p[1:])
    total = int(burn_in) + int(length)
    chunks = []
    have = 0
    while have < total:
        want = max(1024, int((total - have) / chain.m1 * 1.2) + 16)
        u = rng.random(want)
        draws = np.searchsorted(cdf, u, side="left") + 1
        over = draws > chain.truncation
        draws[over] = 1
        ends = np.cumsum(draws)
        states = np.repeat(ends, draws) - np.arange(ends[-1])
        states[np.repeat(over, draws)] = -1
        chunks.append(states)
        have += states.size
    states = np.concatenate(chunks)[burn_in:total]
    return states, int(np.count_nonzero(states == -1))


def _density_start(m: IntermittentMap, rng, pi_cdf) -> float:
    """One point distributed by the invariant density: a cell drawn with
    its stationary weight, then a uniform position inside it."""
    while True:
        cell = int(np.searchsorted(pi_cdf, rng.random(), side="left")) + 1
        if cell <= m.symbol_cap:
            width = m.breakpoints[cell - 1] - m.breakpoints[cell]
            return float(m.breakpoints[cell] + rng.random() * width)


def map_states(m: IntermittentMap, length: int, seed: int,
               burn_in: int = BURN_IN, stream: int = 0):
    """Float-orbit coded states with censoring.

    The orbit starts from an invariant-density sample and iterates the
    actual map.  Whenever it falls below the resolvable depth the step is
    recorded as ``-1``, counted, and the orbit restarts fresh.
    """
    rng = _rng(seed, stream)
    chain = m.chain
    pi_cdf = np.cumsum(chain.pi[1:])
    total = int(burn_in) + int(length)
    out = np.empty(total, dtype=np.int64)
    x = _density_start(m, rng, pi_cdf)
    censored = 0
    for t in range(total):
        try:
            out[t] = encode(m, x)
            x = apply(m, x)
        except SymbolCapExceeded:
            out[t] = -1
            censored += 1
            x = _density_start(m, rng, pi_cdf)
    out = out[burn_in:]
    return out, int(np.count_nonzero(out == -1))


def _state_stream(m: IntermittentMap, sampler: str, length, seed, burn_in,
                  stream=0):
    if sampler == "chain":
        return sample_states(m.chain, length, seed, burn_in, stream)
    if sampler == "map":
        return map_states(m, length, seed, burn_in, stream)
    raise PreconditionViolated(f"unknown sampler {sampler!r}")


def _observe(obs, states: np.ndarray) -> np.ndarray:
    """Observable values along a state stream; sentinel steps become NaN."""
    clipped = np.clip(states, 0, obs.size)
    vals = np.where(states > obs.size, obs.limit, obs.values[clipped])
    return np.where(states < 1, np.nan, vals)


# ----------------------------------------------------------------------
# Monte Carlo estimators
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate with its provenance.

    stderr comes from batch means; censored counts the sample pairs that
    straddled an unresolvable step and were skipped.
    """

    mean: float
    stderr: float
    n_samples: int
    seed: int
    censored: int = 0

    def __post_init__(self):
        if self.stderr < 0.0:
            raise PreconditionViolated("stderr cannot be negative")


def _batch_stderr(y: np.ndarray, batches: int = BATCHES) -> float:
    """Standard error of the mean of ``y`` from contiguous batch means,
    ignoring NaN entries."""
    edges = np.linspace(0, y.size, batches + 1).astype(int)
    means = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a and np.any(np.isfinite(y[a:b])):
            means.append(np.nanmean(y[a:b]))
    means = np.asarray(means)
    if means.size < 2:
        return math.inf
    return float(np.std(means, ddof=1) / math.sqrt(means.size))


def mc_correlation(m: IntermittentMap, u, v, n_list, orbit_length: int,
                   seed: int, burn_in: int = BURN_IN, sampler: str = "chain",
                   streams: int = 1) -> dict:
    """Time-average estimates of the lag-n covariance of two cell
    observables along a coded orbit.

    For each n the estimator is mean(u(s_{t+n}) v(s_t)) - mean(u) mean(v)
    with batch-mean standard errors; pairs that straddle a censored step
    are skipped and counted.  Streams use disjoint generator keys and
    merge by inverse-variance-free weighted average (weights = sample
    counts).  Returns ``{n: McEstimate}``.
    """
    n_list = [int(n) for n in n_list]
    if not n_list or min(n_list) < 0:
        raise PreconditionViolated("need nonnegative lags")
    if max(n_list) >= orbit_length // 2:
        raise PreconditionViolated("largest lag must be well inside the orbit length")
    per_stream = []
    for s in range(int(streams)):
        states, _ = _state_stream(m, sampler, orbit_length, seed, burn_in, s)
        uu = _observe(u, states)
        vv = _observe(v, states)
        u_mean = np.nanmean(uu)
        v_mean = np.nanmean(vv)
        rows = {}
        for n in n_list:
            y = uu[n:] * vv[: vv.size - n] if n > 0 else uu * vv
            valid = int(np.count_nonzero(np.isfinite(y)))
            rows[n] = (
                float(np.nanmean(y) - u_mean * v_mean),
                _batch_stderr(y),
                valid,
                y.size - valid,
            )
        per_stream.append(rows)

    out = {}
    for n in n_list:
        w = np.array([st[n][2] for st in per_stream], dtype=float)
        mean = float(np.dot(w, [st[n][0] for st in per_stream]) / w.sum())
        var = float(np.dot(w ** 2, [st[n][1] ** 2 for st in per_stream]) / w.sum() ** 2)
        out[n] = McEstimate(
            mean=mean,
            stderr=math.sqrt(var),
            n_samples=int(w.sum()),
            seed=int(seed),
            censored=sum(st[n][3] for st in per_stream),
        )
    return out


@dataclass(frozen=True)
class KacReport:
    """Occupation frequency of the top cell against the mean return time.

    ``product`` estimates occupation * mean return, which is 1 for the
    true dynamics; ``histogram[k]`` counts completed returns of length k.
    """

    rho_e: float
    mean_return: float
    product: float
    histogram: np.ndarray
    n_returns: int
    n_steps: int
    censored: int
    seed: int


def kac_check(m: IntermittentMap, orbit_length: int, seed: int,
              burn_in: int = BURN_IN, sampler: str = "chain") -> KacReport:
    """Empirical occupation of the top cell times the empirical mean
    return, with the return-length histogram for comparison with the law."""
    states, censored = _state_stream(m, sampler, orbit_length, seed, burn_in)
    valid = states > 0
    rho_e = float(np.count_nonzero(states == 1) / np.count_nonzero(valid))
    ones = np.flatnonzero(states == 1)
    if ones.size < 2:
        raise PreconditionViolated("orbit too short: no completed return")
    gaps = np.diff(ones)
    broken = np.cumsum(states == -1)
    clean = broken[ones[1:]] == broken[ones[:-1]]
    returns = gaps[clean]
    mean_return = float(returns.mean())
    histogram = np.bincount(returns)
    return KacReport(
        rho_e=rho_e,
        mean_return=mean_return,
        product=rho_e * mean_return,
        histogram=histogram,
        n_returns=int(returns.size),
        n_steps=int(states.size),
        censored=censored,
        seed=int(seed),
    )


@dataclass(frozen=True)
class FrequencyReport:
    """Empirical one-step frequencies of a coded orbit against the chain.

    Rows and columns run over states 1..i_max; ``transition_stderr`` holds
    per-cell binomial standard errors given the row visit counts, and the
    occupation estimates carry batch-mean standard errors.
    """

    transition_hat: np.ndarray
    transition_exact: np.ndarray
    transition_stderr: np.ndarray
    row_visits: np.ndarray
    occupation_hat: np.ndarray
    occupation_exact: np.ndarray
    occupation_stderr: np.ndarray
    n_steps: int
    censored: int
    seed: int


def markov_frequency_check(m: IntermittentMap, orbit_length: int, seed: int,
                           i_max: int = 10, burn_in: int = BURN_IN,
                           sampler: str = "chain") -> FrequencyReport:
    """Tabulate empirical transition frequencies and occupation of the
    first ``i_max`` cells against the exact chain entries."""
    chain = m.chain
    if i_max < 2 or i_max > chain.truncation - 1:
        raise PreconditionViolated("i_max must fit inside the stored prefix")
    states, censored = _state_stream(m, sampler, orbit_length, seed, burn_in)

    a, b = states[:-1], states[1:]
    # normalize by every resolved exit from the row, not only exits landing
    # inside the window, else each cell inflates by 1/P(next <= i_max)
    origin = (a >= 1) & (a <= i_max) & (b >= 1)
    row_visits = np.bincount(a[origin] - 1, minlength=i_max)
    cell = origin & (b <= i_max)
    flat = (a[cell] - 1) * i_max + (b[cell] - 1)
    counts = np.bincount(flat, minlength=i_max * i_max).reshape(i_max, i_max)
    with np.errstate(invalid="ignore", divide="ignore"):
        hat = counts / row_visits[:, None]
        stderr = np.sqrt(hat * (1.0 - hat) / row_visits[:, None])
    exact = np.zeros((i_max, i_max))
    exact[0, :] = chain.p[1 : i_max + 1]
    idx = np.arange(1, i_max)
    exact[idx, idx - 1] = 1.0

    occ_exact = chain.pi[1 : i_max + 1].copy()
    valid_steps = int(np.count_nonzero(states > 0))
    occ_hat = np.array(
        [np.count_nonzero(states == i) / valid_steps for i in range(1, i_max + 1)]
    )
    occ_stderr = np.array(
        [
            _batch_stderr(np.where(states > 0, (states == i).astype(float), np.nan))
            for i in range(1, i_max + 1)
        ]
    )
    return FrequencyReport(
        transition_hat=hat,
        transition_exact=exact,
        transition_stderr=stderr,
        row_visits=row_visits,
        occupation_hat=occ_hat,
        occupation_exact=occ_exact,
        occupation_stderr=occ_stderr,
        n_steps=int(states.size),
        censored=censored,
        seed=int(seed),
    )


@dataclass(frozen=True)
class EntranceReport:
    """Empirical survival of the first entrance time into a top interval.

    ``a_effective`` is the cell edge the request was snapped to: entrance
    is measured into [d_k, 1] where d_k is the deepest breakpoint at or
    above the requested threshold.
    """

    curve: RateCurve
    fit: RateFit | None
    a_effective: float
    k: int
    n_samples: int
    seed: int


def entrance_tail(m: IntermittentMap, a: float, n_max: int, samples: int,
                  seed: int, fit_window=None) -> EntranceReport:
    """Survival function of the first entrance time into ``[a, 1]`` from
    invariant-density starts.

    The target is snapped inward to the nearest cell edge ``d_k >= a``, so
    entrance means reaching a cell of index at most k.  Starts and jump
    draws beyond the stored prefix enter deeper than the horizon and are
    counted as still-out at every n, which keeps the tail exact instead of
    biased.  A log-log fit over ``fit_window`` (default the last decade)
    is attached when the window's values are positive.
    """
    chain = m.chain
    if not 0.0 < a <= chain.d[1]:
        raise PreconditionViolated(
            "threshold must lie in (0, d_1]: entrances inside the top cell "
            "are not resolved by the partition"
        )
    n_max = int(n_max)
    d = chain.d
    below = int(np.searchsorted(d[::-1], a, side="left"))
    k = d.size - 1 - below  # deepest index with d_k >= a
    if k >= chain.truncation - n_max:
        raise TruncationTooSmall("horizon n_max reaches past the stored prefix")

    rng = _rng(seed)
    pi_cdf = np.cumsum(chain.pi[1:])
    p_cdf = np.cumsum(chain.p[1:])
    u = rng.random(int(samples))
    start = np.searchsorted(pi_cdf, u, side="left") + 1
    deep_start = u > pi_cdf[-1]

    t = np.empty(int(samples), dtype=np.int64)
    t[start > k] = start[start > k] - k
    t[(start >= 2) & (start <= k)] = 1
    at_one = np.flatnonzero((start == 1) & ~deep_start)
    uj = rng.random(at_one.size)
    jump = np.searchsorted(p_cdf, uj, side="left") + 1
    t[at_one] = 1 + np.maximum(0, jump - k)
    deep = deep_start.copy()
    deep[at_one] |= uj > p_cdf[-1]
    t[deep] = n_max + 1  # beyond any resolvable horizon by the gate above

    counts = np.bincount(np.clip(t, 0, n_max + 1), minlength=n_max + 2)
    beyond = counts[::-1].cumsum()[::-1]
    grid = np.arange(1, n_max + 1)
    surv = beyond[2 : n_max + 2] / float(samples)
    curve = RateCurve(grid, surv)

    if fit_window is None:
        fit_window = (max(2, n_max // 10), n_max)
    try:
        fit = rate_fit(curve, fit_window)
    except (ZeroValueInWindow, PreconditionViolated):
        fit = None
    return EntranceReport(
        curve=curve,
        fit=fit,
        a_effective=float(d[k]),
        k=k,
        n_samples=int(samples),
        seed=int(seed),
    )


# ----------------------------------------------------------------------
# invariant density and the locally constant transfer matrix
# ----------------------------------------------------------------------

def invariant_density(chain, n: int | None = None) -> np.ndarray:
    """Step heights of the invariant density over the partition cells.

    ``h[i] = pi_1 d_{i-1} / p_i`` (entry 0 unused), normalized so that
    ``sum h_i p_i = 1``: cell i has width p_i and carries stationary mass
    pi_i.  Flat for a geometric law; grows roughly linearly for power
    tails, the usual divergence of intermittent densities at 0.
    """
    if not chain.positive_recurrent:
        raise NotPositiveRecurrent("invariant density needs a normalizable level")
    support = _support_length(chain)
    if n is None:
        n = support
    if n > support:
        raise TruncationTooSmall("density requested beyond the law's support")
    h = np.zeros(n + 1)
    h[1:] = chain.pi1 * chain.d[:n] / chain.p[1 : n + 1]
    h.flags.writeable = False
    return h


@dataclass(frozen=True)
class TransferReport:
    """Fixed-point residuals of the locally constant transfer matrix.

    density_residual: worst interior defect of the density under the row
    action.  law_residual: worst defect of the return law under the
    column action, over descent rows (the top row aggregates the whole
    law and is settled by the survival mass instead).
    """

    density_residual: float
    law_residual: float
    dimension: int


def pf_check(chain, n: int = 500) -> TransferReport:
    """Build the cell-to-cell transfer matrix M(i,j) = (p_i/p_j) P(i,j)
    and measure how well it fixes the density (row action) and the return
    law (column action)."""
    if not chain.positive_recurrent:
        raise NotPositiveRecurrent("transfer check needs a normalizable level")
    n = int(min(n, _support_length(chain)))
    if n < 3:
        raise TruncationTooSmall("need at least three resolvable cells")
    if n > 1000:
        raise PreconditionViolated("dense transfer matrices are capped at N = 1000")
    p = chain.p[1 : n + 1]
    h = chain.pi1 * chain.d[:n] / p
    mat = np.zeros((n, n))
    mat[0, :] = p[0]
    idx = np.arange(1, n)
    mat[idx, idx - 1] = p[idx] / p[idx - 1]
    density_residual = float(np.abs((h @ mat)[: n - 1] - h[: n - 1]).max())
    law_residual = float(np.abs((mat @ p)[1:] - p[1:]).max())
    return TransferReport(density_residual, law_residual, n)
