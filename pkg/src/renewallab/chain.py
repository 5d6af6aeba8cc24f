"""Renewal chains on the positive integers.

A chain is determined by a return law ``p = (p_1, p_2, ...)``: row one of the
transition matrix is ``p`` and every other row steps deterministically down
by one.  The module builds finite working prefixes of everything derived
from ``p`` -- survival sums ``d_n = P(return > n)``, the stationary law
``pi_n = pi_1 d_{n-1}``, first-passage laws between arbitrary states, and
return-time moments -- with analytic tail corrections beyond the stored
prefix for the parametric families.

Finiteness of moments is always decided from the declared tail family of
the law, never from floating-point underflow of a computed prefix.

Array convention: prefixes are subscript-aligned, ``p[n]`` holds ``p_n``
with ``p[0] = 0`` unused, so recursions read like the formulas they
implement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as _gamma_fn
from scipy.special import gammaincc

from .errors import (
    DegreeTooSmall,
    NotNormalized,
    PeriodicSupport,
    PreconditionViolated,
    TruncationTooSmall,
    ZeroProbabilityBranch,
)
from .measures import SignedDistribution, TailDecl
from .series import TruncatedSeries, divide

__all__ = [
    "GeometricLaw",
    "ZetaTailLaw",
    "FiniteLaw",
    "CustomLaw",
    "RenewalChain",
    "FirstPassageLaw",
    "MomentValue",
    "POrder",
    "CodivergenceProbe",
    "build_chain",
    "ergodic_degree",
    "first_passage",
    "moment",
    "second_moment_identity",
    "p_order",
    "codivergence_probe",
]

#: Mass tolerance for "the return law is a probability law".
NORMALIZATION_TOL = 1e-10

#: Length of the direct partial sums backing zeta-family constants.
_ZETA_PARTIAL_TERMS = 100_000


# ----------------------------------------------------------------------
# zeta-family constants: direct partial sums plus Euler-Maclaurin tails
# ----------------------------------------------------------------------

def _tail_integral(s: float, beta: float, a: float) -> float:
    """``int_a^inf x^-s log(x+1)^beta dx`` to near machine precision.

    The ``log(x)`` part is an upper incomplete gamma after ``t = log x``;
    the ``log(x+1) - log(x)`` remainder is a smooth finite-interval
    integral after ``u = a/x``, written through expm1/log1p so no
    cancellation occurs for large ``x``.
    """
    if beta == 0.0:
        return a ** (1.0 - s) / (s - 1.0)
    y = (s - 1.0) * math.log(a)
    main = (s - 1.0) ** (-(beta + 1.0)) * gammaincc(beta + 1.0, y) * _gamma_fn(beta + 1.0)

    def rem(u):
        x = a / u
        lx = math.log(x)
        return u ** (s - 2.0) * lx ** beta * math.expm1(beta * math.log1p(math.log1p(1.0 / x) / lx))

    r, _ = quad(rem, 0.0, 1.0, epsabs=1e-300, epsrel=1e-11, limit=200)
    return main + a ** (1.0 - s) * r


def _weight_tail(s: float, beta: float, m: int) -> float:
    """``sum_{n > m} n^-s log(n+1)^beta`` via integral plus endpoint terms.

    Euler-Maclaurin with corrections through the third-derivative term; the
    neglected term is O(g^(5)(m)), negligible once the expansion point is
    pushed past 64 by direct summation of the first block.
    """
    if s <= 1.0:
        return math.inf
    if m < 64:
        n = np.arange(m + 1, 65, dtype=float)
        block = n ** -s
        if beta != 0.0:
            block *= np.log(n + 1.0) ** beta
        return float(block.sum()) + _weight_tail(s, beta, 64)
    a = float(m + 1)

    def g(x):
        return x ** -s * math.log(x + 1.0) ** beta

    def gprime(x):
        lg = math.log(x + 1.0)
        return x ** (-s - 1.0) * lg ** beta * (-s + beta * x / ((x + 1.0) * lg))

    if beta == 0.0:
        g3 = -s * (s + 1.0) * (s + 2.0) * a ** (-s - 3.0)
    else:
        # third derivative from a centered stencil; the /720 weight makes
        # its modest relative accuracy irrelevant
        h = a / 50.0
        g3 = (-g(a - 2 * h) + 2 * g(a - h) - 2 * g(a + h) + g(a + 2 * h)) / (2 * h ** 3)
    return _tail_integral(s, beta, a) + 0.5 * g(a) - gprime(a) / 12.0 + g3 / 720.0


@lru_cache(maxsize=None)
def _weight_sum(s: float, beta: float) -> float:
    """``sum_{n >= 1} n^-s log(n+1)^beta`` by direct summation of the first
    block of terms plus the analytic tail.  Cached per (s, beta)."""
    if s <= 1.0:
        return math.inf
    n = np.arange(1, _ZETA_PARTIAL_TERMS + 1, dtype=float)
    w = n ** -s
    if beta != 0.0:
        w *= np.log(n + 1.0) ** beta
    return float(np.sum(w)) + _weight_tail(s, beta, _ZETA_PARTIAL_TERMS)


# ----------------------------------------------------------------------
# return laws
# ----------------------------------------------------------------------

def _survival_by_telescoping(p: np.ndarray, tail: float) -> np.ndarray:
    """Build ``d[k] = sum_{i>k} p_i`` by one cumulative sum seeded with the
    analytic tail, so ``d[k] == d[k+1] + p[k+1]`` holds exactly in floats."""
    rev = np.concatenate(([tail], p[:0:-1]))
    return np.cumsum(rev)[::-1]


@dataclass(frozen=True)
class GeometricLaw:
    """``p_n = (1-q) q^(n-1)``: memoryless returns, ratio ``q`` in (0, 1)."""

    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ZeroProbabilityBranch(f"geometric ratio must lie in (0,1), got {self.q!r}")

    def prefix(self, n: int) -> np.ndarray:
        p = np.zeros(n + 1)
        p[1:] = (1.0 - self.q) * self.q ** np.arange(0.0, n)
        return p

    def survival(self, n: int) -> np.ndarray:
        # telescoping from the analytic tail rather than the closed form
        # q^k keeps d[k] == d[k+1] + p[k+1] exact in floats for every q
        return _survival_by_telescoping(self.prefix(n), self.tail_beyond(n))

    def tail_beyond(self, n: int) -> float:
        return self.q ** n

    def second_tail_beyond(self, n: int) -> float:
        return self.q ** (n + 1) / (1.0 - self.q)

    def mean_return(self) -> float:
        return 1.0 / (1.0 - self.q)

    def degree(self) -> float:
        return math.inf

    def tail_family(self) -> TailDecl:
        return TailDecl("geometric", ratio=self.q)

    def describe(self) -> dict:
        return {"type": "geometric", "q": self.q}


@dataclass(frozen=True)
class ZetaTailLaw:
    """``p_n`` proportional to ``n^-(degree+2) log(n+1)^log_power``.

    ``degree`` is the polynomial ergodic degree of the resulting chain;
    values in (-1, 0] give a normalizable but null-recurrent law.  The
    normalization constant and mean come from direct partial sums of 1e5
    terms plus analytic tail integrals, cached per parameter pair.
    """

    degree_: float = field(metadata={"doc": "polynomial degree d"})
    log_power: float = 0.0

    def __post_init__(self):
        if not self.degree_ > -1.0:
            raise ZeroProbabilityBranch(
                f"degree must exceed -1 for a normalizable law, got {self.degree_!r}"
            )
        if self.log_power < 0.0:
            raise ZeroProbabilityBranch(f"log_power must be >= 0, got {self.log_power!r}")

    @property
    def s(self) -> float:
        return self.degree_ + 2.0

    @property
    def normalization(self) -> float:
        return _weight_sum(self.s, self.log_power)

    def prefix(self, n: int) -> np.ndarray:
        p = np.zeros(n + 1)
        idx = np.arange(1.0, n + 1.0)
        w = idx ** -self.s
        if self.log_power != 0.0:
            w *= np.log(idx + 1.0) ** self.log_power
        p[1:] = w / self.normalization
        return p

    def survival(self, n: int) -> np.ndarray:
        return _survival_by_telescoping(self.prefix(n), self.tail_beyond(n))

    def tail_beyond(self, n: int) -> float:
        return _weight_tail(self.s, self.log_power, n) / self.normalization

    def second_tail_beyond(self, n: int) -> float:
        if self.degree_ <= 0.0:
            return math.inf
        first = _weight_tail(self.s - 1.0, self.log_power, n + 1)
        zeroth = _weight_tail(self.s, self.log_power, n + 1)
        return (first - (n + 1) * zeroth) / self.normalization

    def mean_return(self) -> float:
        if self.degree_ <= 0.0:
            return math.inf
        return _weight_sum(self.s - 1.0, self.log_power) / self.normalization

    def degree(self) -> float:
        return self.degree_

    def tail_family(self) -> TailDecl:
        return TailDecl(
            "power",
            exponent=self.s,
            log_power=self.log_power,
            amplitude=1.0 / self.normalization,
        )

    def describe(self) -> dict:
        return {"type": "zeta", "degree": self.degree_, "log_power": self.log_power}


def _validate_prob_prefix(probs) -> np.ndarray:
    arr = np.asarray(probs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise NotNormalized("probability prefix must be a nonempty vector")
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise NotNormalized("probabilities must be finite and nonnegative")
    support = np.nonzero(arr)[0] + 1
    if support.size == 0:
        raise ZeroProbabilityBranch("law has empty support")
    if np.gcd.reduce(support) != 1:
        raise PeriodicSupport(f"support gcd is {np.gcd.reduce(support)}, chain would be periodic")
    return arr


@dataclass(frozen=True)
class FiniteLaw:
    """Explicit finitely supported return law ``p_1 .. p_K``."""

    probs: tuple

    def __init__(self, probs):
        arr = _validate_prob_prefix(probs)
        if abs(arr.sum() - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"probabilities sum to {arr.sum()!r}, not 1")
        object.__setattr__(self, "probs", tuple(float(x) for x in arr))

    def prefix(self, n: int) -> np.ndarray:
        p = np.zeros(n + 1)
        k = min(n, len(self.probs))
        p[1 : k + 1] = self.probs[:k]
        return p

    def survival(self, n: int) -> np.ndarray:
        return _survival_by_telescoping(self.prefix(n), self.tail_beyond(n))

    def tail_beyond(self, n: int) -> float:
        return float(sum(self.probs[n:])) if n < len(self.probs) else 0.0

    def second_tail_beyond(self, n: int) -> float:
        return float(
            sum((k - n) * pk for k, pk in enumerate(self.probs, start=1) if k > n + 1)
        )

    def mean_return(self) -> float:
        return float(sum(k * pk for k, pk in enumerate(self.probs, start=1)))

    def degree(self) -> float:
        return math.inf

    def tail_family(self) -> TailDecl:
        return TailDecl("finite")

    def describe(self) -> dict:
        return {"type": "finite", "probs": list(self.probs)}


@dataclass(frozen=True)
class CustomLaw:
    """Explicit prefix with a declared asymptotic tail family.

    The stored prefix must itself be normalized (any mass beyond it would be
    numerically invisible); the declared ``tail_exponent`` records how the
    law would continue and drives every finiteness flag.  A declared
    exponent ``t`` means ``p_n ~ n^-t``, i.e. ergodic degree ``t - 2``.
    """

    probs: tuple
    tail_exponent: float = math.inf
    tail_log_power: float = 0.0

    def __init__(self, probs, tail_exponent=math.inf, tail_log_power=0.0):
        arr = _validate_prob_prefix(probs)
        if abs(arr.sum() - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"probabilities sum to {arr.sum()!r}, not 1")
        if not tail_exponent > 1.0:
            raise NotNormalized(f"declared tail exponent must exceed 1, got {tail_exponent!r}")
        object.__setattr__(self, "probs", tuple(float(x) for x in arr))
        object.__setattr__(self, "tail_exponent", float(tail_exponent))
        object.__setattr__(self, "tail_log_power", float(tail_log_power))

    prefix = FiniteLaw.prefix
    survival = FiniteLaw.survival
    tail_beyond = FiniteLaw.tail_beyond
    second_tail_beyond = FiniteLaw.second_tail_beyond
    mean_return = FiniteLaw.mean_return

    def degree(self) -> float:
        return self.tail_exponent - 2.0

    def tail_family(self) -> TailDecl:
        if math.isinf(self.tail_exponent):
            return TailDecl("finite")
        return TailDecl("power", exponent=self.tail_exponent, log_power=self.tail_log_power)

    def describe(self) -> dict:
        return {
            "type": "custom",
            "probs": list(self.probs),
            "tail_exponent": self.tail_exponent,
            "tail_log_power": self.tail_log_power,
        }


# ----------------------------------------------------------------------
# the chain
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RenewalChain:
    """Working prefix of a renewal chain; see :func:`build_chain`.

    Attributes
    ----------
    law : return law object
    truncation : int
        Length ``N`` of the stored prefix.
    p : ndarray, shape (N+1,)
        Return probabilities, subscript-aligned (``p[0] = 0``).
    d : ndarray, shape (N+1,)
        Survival sums ``d[n] = P(return > n)``; ``d[N]`` is the analytic
        tail beyond the prefix and ``d[0] == 1``.
    d_tail : ndarray or None
        ``d_tail[n] = sum_{l > n} d_l`` including the analytic part; None
        for null-recurrent chains where this diverges.
    m1 : float
        Mean return time (``inf`` when null recurrent).
    pi : ndarray or None
        Stationary prefix ``pi[j] = pi1 * d[j-1]``; None when null recurrent.
    """

    law: object
    truncation: int
    p: np.ndarray
    d: np.ndarray
    d_tail: np.ndarray | None
    m1: float
    pi1: float | None
    pi: np.ndarray | None
    classification: str
    ergodic_degree: float

    def __post_init__(self):
        for name in ("p", "d", "d_tail", "pi"):
            arr = getattr(self, name)
            if arr is not None:
                arr.flags.writeable = False

    @property
    def positive_recurrent(self) -> bool:
        return self.classification == "positive-recurrent"

    def stationary_mass_beyond(self, m: int) -> float:
        """Analytic stationary mass ``sum_{j > m} pi_j``."""
        if not self.positive_recurrent:
            raise DegreeTooSmall("chain has no stationary law")
        if not 0 <= m <= self.truncation:
            raise TruncationTooSmall(f"need m <= {self.truncation}, got {m}")
        return self.pi1 * (self.d[m] + self.d_tail[m])

    def describe(self) -> dict:
        out = {
            "law": self.law.describe(),
            "truncation": self.truncation,
            "classification": self.classification,
            "ergodic_degree": self.ergodic_degree,
            "m1": self.m1,
            "pi1": self.pi1,
        }
        return out


def build_chain(law, truncation: int) -> RenewalChain:
    """Materialize the working prefix of the chain defined by ``law``.

    Validates normalization (prefix plus analytic tail within 1e-10 of one)
    and aperiodicity, then builds the survival and stationary prefixes with
    exact telescoping so that downstream fixed-point residuals sit at the
    rounding level.

    Raises
    ------
    NotNormalized
        If the law's mass differs from one beyond tolerance.
    PeriodicSupport
        If the support of ``p`` has a common divisor larger than one.
    """
    n = int(truncation)
    if n < 2:
        raise TruncationTooSmall("truncation must be at least 2")
    p = law.prefix(n)
    d = law.survival(n)
    total = float(p[1:].sum() + law.tail_beyond(n))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"prefix plus tail sums to {total!r}, not 1")
    if abs(d[0] - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"survival prefix starts at {d[0]!r}, not 1")
    d = d.copy()
    d[0] = 1.0

    m1 = law.mean_return()
    if math.isfinite(m1):
        pi1 = 1.0 / m1
        pi = np.zeros(n + 1)
        pi[1:] = pi1 * d[:n]
        d_tail = _survival_by_telescoping(d, law.second_tail_beyond(n))
        classification = "positive-recurrent"
    else:
        pi1, pi, d_tail = None, None, None
        classification = "null-recurrent"

    return RenewalChain(
        law=law,
        truncation=n,
        p=p,
        d=d,
        d_tail=d_tail,
        m1=m1,
        pi1=pi1,
        pi=pi,
        classification=classification,
        ergodic_degree=float(law.degree()),
    )


def ergodic_degree(chain: RenewalChain) -> float:
    """Polynomial moment degree of the return law: the supremum of ``g``
    with ``sum n^(g+1) p_n`` finite.  ``inf`` for geometric or finite laws."""
    return chain.ergodic_degree


# ----------------------------------------------------------------------
# first passage and moments
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FirstPassageLaw:
    """First-passage time law from state ``i`` to state ``j``."""

    i: int
    j: int
    series: TruncatedSeries
    prefix_mass: float


@dataclass(frozen=True)
class MomentValue:
    value: float
    gamma: float
    tail_estimate: float
    finite: bool


def first_passage(chain, i: int, j: int, trunc: int | None = None,
                  mass_tol: float = 1e-6) -> FirstPassageLaw:
    """First-passage law ``f^n_{ij}`` as a truncated series.

    Descending passages (``i > j``) are a point mass at ``i - j``.  For
    ``j >= i`` the law is the series quotient

        ``z^(i-j) P_j(z) / (1 - sum_{0<n<j} p_n z^n)``

    with ``P_j(z) = sum_{n>=j} p_n z^n``, evaluated coefficientwise.

    Raises
    ------
    TruncationTooSmall
        If the requested horizon needs unavailable ``p`` entries, or if the
        captured mass falls short of ``1 - mass_tol``.
    """
    if i < 1 or j < 1:
        raise ValueError("states are indexed from 1")
    if trunc is None:
        n = chain.truncation - max(0, j - i)
    else:
        n = int(trunc)
    if i > j:
        if i - j > n:
            raise TruncationTooSmall(f"descent {i}->{j} takes {i - j} steps > horizon {n}")
        coeffs = np.zeros(n + 1)
        coeffs[i - j] = 1.0
        return FirstPassageLaw(i, j, TruncatedSeries(coeffs), 1.0)

    need_p = n - i + j
    if need_p > chain.truncation:
        raise TruncationTooSmall(
            f"horizon {n} for passage {i}->{j} needs p up to {need_p}, "
            f"chain stores {chain.truncation}"
        )
    num = np.zeros(n + 1)
    num[i:] = chain.p[j : j + (n - i) + 1]
    den = np.zeros(n + 1)
    den[0] = 1.0
    upper = min(j - 1, n)
    if upper >= 1:
        den[1 : upper + 1] = -chain.p[1 : upper + 1]
    f = divide(num, den)
    mass = float(f.coeffs.sum())
    if mass < 1.0 - mass_tol:
        raise TruncationTooSmall(
            f"captured first-passage mass {mass:.12g} below 1 - {mass_tol:g}; "
            "increase the horizon or loosen mass_tol"
        )
    return FirstPassageLaw(i, j, f, mass)


def _moment_finite(chain, i: int, j: int, gamma: float) -> bool:
    if i > j:
        return True
    return gamma < chain.ergodic_degree + 1.0


def _moment_tail_estimate(chain, f: FirstPassageLaw, gamma: float) -> float:
    """Crude analytic continuation of the moment sum beyond the horizon,
    calibrated on the last stored coefficient and the declared family."""
    fam = chain.law.tail_family()
    n = f.series.truncation_order
    last = float(f.series.coeffs[-1])
    if fam.kind == "finite" or last <= 0.0:
        return 0.0
    if fam.kind == "geometric":
        q = fam.ratio
        return last * n ** gamma * q / (1.0 - q)
    s = fam.exponent
    if gamma + 1.0 >= s:
        return math.inf
    return last * n ** (gamma + 1.0) / (s - gamma - 1.0)


def moment(chain, i: int, j: int, gamma: float, trunc: int | None = None) -> MomentValue:
    """Truncated moment ``sum_n n^gamma f^n_{ij}`` with a declared-tail
    estimate of the missing mass and a finiteness flag derived from the
    law's tail family (never from underflow)."""
    f = first_passage(chain, i, j, trunc=trunc, mass_tol=math.inf)
    n = np.arange(f.series.coeffs.size, dtype=float)
    n[0] = 1.0  # 0^gamma guard; coefficient there is zero anyway
    value = float(np.dot(n ** gamma, f.series.coeffs))
    return MomentValue(
        value=value,
        gamma=gamma,
        tail_estimate=_moment_tail_estimate(chain, f, gamma),
        finite=_moment_finite(chain, i, j, gamma),
    )


def second_moment_identity(chain, i: int, trunc: int | None = None):
    """Two-route check of the second return-time moment at state ``i``.

    The direct route sums ``n^2 f^n_{ii}``; the closed route expresses the
    same quantity through the state-1 moment:

        ``(pi_1/pi_i) * (M2_11 + 2 * sum_{n<i} n p_n / pi_i)``.

    Returns ``(lhs, rhs, gap)`` with ``gap`` the relative disagreement.

    Raises
    ------
    DegreeTooSmall
        If the declared degree makes the second moment infinite.
    """
    if not chain.positive_recurrent:
        raise DegreeTooSmall("second moments require a positive-recurrent chain")
    if chain.ergodic_degree <= 1.0:
        raise DegreeTooSmall(
            f"degree {chain.ergodic_degree} <= 1: second return-time moments diverge"
        )
    if chain.pi[i] == 0.0:
        raise PreconditionViolated(f"state {i} has zero stationary mass")
    lhs = moment(chain, i, i, 2.0, trunc=trunc).value
    m2_11 = moment(chain, 1, 1, 2.0, trunc=trunc).value
    pi_i = chain.pi[i]
    head = float(np.dot(np.arange(1.0, i), chain.p[1:i]))
    rhs = (chain.pi1 / pi_i) * (m2_11 + 2.0 * head / pi_i)
    gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return lhs, rhs, gap


# ----------------------------------------------------------------------
# stationarity order of an initial distribution
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class POrder:
    """Largest moment order the pairing of ``nu`` with first-passage laws
    supports.  ``boundary`` is set when a declared logarithmic correction
    makes attainment at the supremum ambiguous."""

    value: float
    boundary: bool


def p_order(chain, nu: SignedDistribution, i: int = 1) -> POrder:
    """Supremum of ``g > 0`` with ``sum_l |nu_l| * (g-moment of passage l->i)``
    finite, decided from declared tails.

    The chain contributes the ceiling ``degree + 1`` (through-state-1
    passages); ``nu`` contributes ``a - 1`` when its tail is declared as a
    power ``l^-a``.  The result does not depend on ``i``.
    """
    if i < 1:
        raise ValueError("states are indexed from 1")
    ceiling = chain.ergodic_degree + 1.0
    decl = nu.tail if nu.tail is not None else TailDecl("finite")
    if decl.kind in ("finite", "geometric"):
        nu_part, nu_binding_log = math.inf, False
    else:
        nu_part = decl.exponent - 1.0
        nu_binding_log = decl.log_power != 0.0
    value = min(ceiling, nu_part)
    boundary = nu_binding_log and nu_part <= ceiling
    return POrder(value=value, boundary=boundary)


# ----------------------------------------------------------------------
# codivergence of moment routes
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CodivergenceProbe:
    """Partial-sum curves of the two moment routes and the declared verdict.

    ``partial_direct[n]`` accumulates ``m^(gamma+1) f^m_ii``;
    ``partial_paired[n]`` accumulates ``pi_l x (gamma-moment of l -> i)``.
    Both converge exactly when ``gamma`` is below the ergodic degree.
    """

    gamma: float
    i: int
    partial_direct: np.ndarray
    partial_paired: np.ndarray
    predicted_convergent: bool


def codivergence_probe(chain, gamma: float, i: int = 1, n_max: int | None = None) -> CodivergenceProbe:
    """Build both truncated moment routes side by side.

    Raises
    ------
    DegreeTooSmall
        On null-recurrent chains, where the paired route has no stationary
        weights to pair with.
    """
    if not chain.positive_recurrent:
        raise DegreeTooSmall("codivergence pairing needs the stationary law")
    n = chain.truncation if n_max is None else int(n_max)
    if n > chain.truncation:
        raise TruncationTooSmall(f"n_max {n} exceeds stored prefix {chain.truncation}")

    f = first_passage(chain, i, i, trunc=n, mass_tol=math.inf)
    m = np.arange(n + 1, dtype=float)
    m[0] = 1.0
    direct = np.cumsum(m ** (gamma + 1.0) * f.series.coeffs)

    paired_terms = np.zeros(n + 1)
    for l in range(1, min(i, n + 1)):
        paired_terms[l] = chain.pi[l] * moment(chain, l, i, gamma, trunc=n).value
    hi = np.arange(i + 1, n + 1, dtype=float)
    if hi.size:
        paired_terms[i + 1 :] = chain.pi[i + 1 : n + 1] * (hi - i) ** gamma
    paired = np.cumsum(paired_terms)

    return CodivergenceProbe(
        gamma=gamma,
        i=i,
        partial_direct=direct,
        partial_paired=paired,
        predicted_convergent=bool(gamma < chain.ergodic_degree),
    )
