"""Truncated power-series arithmetic on real coefficient prefixes.

A :class:`TruncatedSeries` stores the finite prefix ``c_0 .. c_N`` of a formal
power series together with its truncation order ``N``.  All binary operations
truncate to the shortest operand; nothing is ever zero-extended silently.
Convolutions accumulate with compensated (Kahan) summation; the reciprocal
uses the direct O(N^2) recursion.  No FFT and no symbolic algebra are used
anywhere, so every coefficient is reproducible to the last rounding.

Coefficient indexing is from zero.  Sequences that are naturally indexed from
one (return-law probabilities ``p_1, p_2, ...``) are stored with ``coeffs[k]``
holding the ``(k+1)``-th term; :func:`tail_sums` documents this convention.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadExponent,
    NegativeCoefficient,
    NonPositiveCoefficient,
    OutOfDomain,
    ZeroLeadingCoefficient,
)

__all__ = [
    "TruncatedSeries",
    "convolve",
    "reciprocal",
    "divide",
    "tail_sums",
    "partial_sums",
    "kaluza_check",
    "convolution_power_probe",
    "zero_diagnostic",
]

#: Leading coefficients at or below this magnitude are treated as zero.
LEADING_FLOOR = 1e-300

#: Largest admissible |z| for evaluation: closed unit disk plus rounding slack.
EVAL_RADIUS = 1.0 + 1e-9


@dataclass(frozen=True)
class TruncatedSeries:
    """Finite prefix ``c_0 .. c_N`` of a power series.

    Parameters
    ----------
    coeffs : array_like
        Coefficients ``c_0 .. c_N``; must be finite reals.
    tail_hint : float, optional
        Declared bound or value for the mass beyond the stored prefix.
        Carried as metadata only; no operation consumes it implicitly.
    """

    coeffs: np.ndarray
    tail_hint: float | None = field(default=None)

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coeffs must be a nonempty one-dimensional array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def truncation_order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def evaluate(self, z):
        """Evaluate the prefix polynomial at ``z`` by Horner's rule.

        ``z`` may be real or complex but must satisfy ``|z| <= 1 + 1e-9``;
        outside that disk the truncated prefix carries no information about
        the series and evaluation refuses with :class:`OutOfDomain`.
        """
        z = complex(z)
        if abs(z) > EVAL_RADIUS:
            raise OutOfDomain(f"|z| = {abs(z):.6g} exceeds {EVAL_RADIUS}")
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        if z.imag == 0.0:
            return acc.real
        return acc

    def to_csv(self, path) -> None:
        """Write ``n,coeff`` rows with full-precision decimal coefficients."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "coeff"])
            for n, c in enumerate(self.coeffs):
                writer.writerow([n, repr(float(c))])

    @classmethod
    def from_csv(cls, path) -> "TruncatedSeries":
        """Read a series written by :meth:`to_csv`."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header[:2] != ["n", "coeff"]:
                raise ValueError(f"unexpected header {header!r}")
            rows = [(int(n), float(c)) for n, c, *_ in reader]
        rows.sort()
        if [n for n, _ in rows] != list(range(len(rows))):
            raise ValueError("coefficient indices must be 0..N without gaps")
        return cls(np.array([c for _, c in rows]))


def _as_series(x) -> TruncatedSeries:
    if isinstance(x, TruncatedSeries):
        return x
    return TruncatedSeries(np.asarray(x, dtype=float))


def convolve(a, b) -> TruncatedSeries:
    """Cauchy product truncated to the shorter operand.

    Each output coefficient ``(a*b)_n = sum_k a_k b_{n-k}`` is accumulated
    with Kahan compensation, vectorized over the output index, so results do
    not drift even for prefixes of length 1e4 and beyond.
    """
    a, b = _as_series(a), _as_series(b)
    n_out = min(len(a), len(b))
    out = np.zeros(n_out)
    comp = np.zeros(n_out)
    bc = b.coeffs
    for k in range(min(len(a), n_out)):
        ak = a.coeffs[k]
        if ak == 0.0:
            continue
        term = ak * bc[: n_out - k]
        y = term - comp[k:]
        t = out[k:] + y
        comp[k:] = (t - out[k:]) - y
        out[k:] = t
    return TruncatedSeries(out)


def reciprocal(d, floor: float = LEADING_FLOOR) -> TruncatedSeries:
    """Coefficients of ``1/D(z)`` on the stored prefix.

    Uses the direct recursion ``c_0 = 1/d_0``,
    ``c_n = -(1/d_0) * sum_{k=1..n} d_k c_{n-k}``.

    Parameters
    ----------
    d : TruncatedSeries or array_like
        Denominator prefix; ``|d_0|`` must exceed ``floor``.
    floor : float, optional
        Magnitude below which the leading coefficient counts as zero.
    """
    d = _as_series(d)
    dc = d.coeffs
    if abs(dc[0]) <= floor:
        raise ZeroLeadingCoefficient(
            f"|d_0| = {abs(dc[0]):.3g} is at or below the floor {floor:.3g}"
        )
    n = len(dc)
    c = np.empty(n)
    inv0 = 1.0 / dc[0]
    c[0] = inv0
    for k in range(1, n):
        c[k] = -inv0 * np.dot(dc[1 : k + 1], c[k - 1 :: -1])
    return TruncatedSeries(c)


def divide(e, d, floor: float = LEADING_FLOOR) -> TruncatedSeries:
    """Coefficients of ``E(z)/D(z)``: ``h_n = sum_k c_k e_{n-k}`` with
    ``c = reciprocal(d)``.  Computed literally as that convolution, so
    ``divide(e, d)`` and ``convolve(e, reciprocal(d))`` agree bit for bit.
    """
    return convolve(_as_series(e), reciprocal(d, floor=floor))


def tail_sums(a, analytic_tail: float = 0.0) -> TruncatedSeries:
    """Inclusive tail sums of a sequence indexed from one.

    The input prefix is read in the return-law convention: ``coeffs[k]``
    holds the term with subscript ``k+1``.  The output has one more entry
    than the input, with

        ``result_n = sum of input terms with subscript > n  (+ analytic_tail)``

    so ``result_0`` is the total mass and ``result_{N+1} = analytic_tail``.
    For a probability prefix ``p_1..p_N`` this produces the survival sums
    ``d_n = P(return > n)``; applied to ``d_1, d_2, ...`` it produces the
    second-order tails.  The output is nonincreasing whenever the input is
    nonnegative, which is required.
    """
    a = _as_series(a)
    if np.any(a.coeffs < 0.0):
        k = int(np.argmax(a.coeffs < 0.0))
        raise NegativeCoefficient(f"coefficient {k} is negative: {a.coeffs[k]!r}")
    if analytic_tail < 0.0:
        raise NegativeCoefficient(f"analytic tail is negative: {analytic_tail!r}")
    out = np.empty(len(a) + 1)
    out[-1] = analytic_tail
    # Reverse cumulative sum keeps the telescoping out[n] = out[n+1] + a[n]
    # exact in floating point, which downstream fixed-point checks rely on.
    out[:-1] = analytic_tail + np.cumsum(a.coeffs[::-1])[::-1]
    return TruncatedSeries(out)


def partial_sums(c) -> TruncatedSeries:
    """Running sums ``s_n = c_0 + ... + c_n`` (plain sequential recurrence)."""
    c = _as_series(c)
    return TruncatedSeries(np.cumsum(c.coeffs))


def kaluza_check(p) -> bool:
    """Test strict decrease and strict log-convexity of a probability prefix.

    The input is read in the return-law convention (``coeffs[k]`` holds
    ``p_{k+1}``).  Returns True when the stored prefix is strictly
    decreasing and each consecutive ratio ``p_{n+1}/p_n`` strictly
    increases; a sequence passing both has a reciprocal with eventually
    monotone partial sums and a generating function whose only boundary
    singularity sits at ``z = 1``.  Geometric prefixes fail (ratios are
    constant, not strictly increasing); normalized power tails such as
    ``p_n prop n^-3`` pass.

    Raises
    ------
    NonPositiveCoefficient
        If any stored coefficient is not strictly positive.
    """
    p = _as_series(p)
    pc = p.coeffs
    if np.any(pc <= 0.0):
        k = int(np.argmax(pc <= 0.0))
        raise NonPositiveCoefficient(f"coefficient {k} is not positive: {pc[k]!r}")
    if len(pc) < 2:
        return True
    if not np.all(pc[:-1] > pc[1:]):
        return False
    if len(pc) < 3:
        return True
    # log-convexity on interior triples: p_n^2 < p_{n-1} p_{n+1}
    return bool(np.all(pc[1:-1] ** 2 < pc[:-2] * pc[2:]))


def convolution_power_probe(gamma: float, n: int):
    """Direct value of ``sum_{k=1..n-1} k^(1-gamma) (n-k)^(1-gamma)``.

    Returns the pair ``(value, regime)`` where ``regime`` names the decay
    class of the sum as ``n`` grows:

    * ``"n^(3-2g)"`` for ``1 < gamma < 2`` (the sum itself grows/levels),
    * ``"log(n)/n"`` for ``gamma == 2``,
    * ``"n^(1-g)"`` for ``gamma > 2`` (edge terms dominate).

    Raises :class:`BadExponent` for ``gamma <= 1``, where the sum does not
    decay at all.
    """
    if gamma <= 1.0:
        raise BadExponent(f"gamma must exceed 1, got {gamma!r}")
    if n < 2:
        raise ValueError("n must be at least 2")
    k = np.arange(1, n, dtype=float)
    value = float(np.sum(k ** (1.0 - gamma) * (n - k) ** (1.0 - gamma)))
    if gamma < 2.0:
        regime = "n^(3-2g)"
    elif gamma == 2.0:
        regime = "log(n)/n"
    else:
        regime = "n^(1-g)"
    return value, regime


def zero_diagnostic(d, radii=None, points: int = 720, max_root_degree: int = 512):
    """Heuristic scan for small prefix-polynomial moduli inside the disk.

    Diagnostic only: a truncated prefix cannot certify anything about zeros
    of the full series.  Scans ``|D(z)|`` over circles ``|z| = r`` and, when
    the prefix degree is modest, also reports the smallest root modulus of
    the prefix polynomial.

    Returns a dict with ``min_abs`` (smallest sampled ``|D(z)|``), ``argmin``
    (the sample point attaining it) and ``smallest_root_modulus`` (None when
    the degree exceeds ``max_root_degree``).
    """
    d = _as_series(d)
    if radii is None:
        radii = np.linspace(0.1, 1.0, 10)
    angles = np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
    best = (np.inf, 0.0 + 0.0j)
    for r in radii:
        zs = r * np.exp(1j * angles)
        vals = np.polynomial.polynomial.polyval(zs, d.coeffs)
        k = int(np.argmin(np.abs(vals)))
        if abs(vals[k]) < best[0]:
            best = (float(abs(vals[k])), complex(zs[k]))
    smallest_root = None
    trimmed = np.trim_zeros(d.coeffs, "b")
    if 1 < trimmed.size <= max_root_degree + 1:
        roots = np.polynomial.polynomial.polyroots(trimmed)
        if roots.size:
            smallest_root = float(np.min(np.abs(roots)))
    return {
        "min_abs": best[0],
        "argmin": best[1],
        "smallest_root_modulus": smallest_root,
    }
