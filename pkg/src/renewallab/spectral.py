"""Finite truncations of the transition operator and its factors.

Everything here is diagnostic: dense matrices at desk scale to verify the
exact operator factorization, an O(N) recursion for eigenvector candidates
read off the generating function, and pointwise generating-function
evaluation with an internal two-route identity check.

Vectors act on matrices from the right, (xT)_j = sum_i x_i t_ij, matching
how distributions evolve.  Matrices are stored dense with entry (i, j) at
``matrix[i-1, j-1]``; the dense builders are capped at N = 1000 since
nothing here needs more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolated, SingularPoint, TruncationTooSmall
from .series import TruncatedSeries, convolve, reciprocal

__all__ = [
    "TruncatedOperator",
    "SpectralProbe",
    "transition_operator",
    "shift_operator",
    "jump_operator",
    "factorization_residual",
    "eigen_from_gf",
    "partial_norm_scan",
    "disk_scan",
    "gf_evaluate",
]

#: Dense matrices stay at desk scale; larger probes use structured actions.
DENSE_LIMIT = 1000


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense N-by-N truncation of an operator on the state space.

    kind : 'transition' | 'shift' | 'jump'
        transition: row 1 is the return law, row i >= 2 descends to i-1.
        shift: the descent alone, with an empty first row (the chain made
        transient by removing returns).
        jump: rank-style return block, entry (i, j) = p_j z^i.
    """

    kind: str
    dimension: int
    matrix: np.ndarray
    z: complex | None = None

    def __post_init__(self):
        self.matrix.flags.writeable = False

    def entry(self, i: int, j: int):
        if not (1 <= i <= self.dimension and 1 <= j <= self.dimension):
            raise PreconditionViolated("entries are addressed with 1-based state labels")
        return self.matrix[i - 1, j - 1]

    def row_action(self, x: np.ndarray) -> np.ndarray:
        """(xT)_j = sum_i x_i t_ij for a length-N vector x."""
        x = np.asarray(x)
        if x.shape != (self.dimension,):
            raise PreconditionViolated(f"need a vector of length {self.dimension}")
        return x @ self.matrix


def _check_dense_size(n: int) -> int:
    n = int(n)
    if n < 2:
        raise TruncationTooSmall("dense truncation needs N >= 2")
    if n > DENSE_LIMIT:
        raise PreconditionViolated(
            f"dense probes are capped at N = {DENSE_LIMIT}; use the structured routes"
        )
    return n


def transition_operator(chain, n: int) -> TruncatedOperator:
    if n > chain.truncation:
        raise TruncationTooSmall("chain prefix shorter than requested dimension")
    n = _check_dense_size(n)
    m = np.zeros((n, n))
    m[0, :] = chain.p[1 : n + 1]
    idx = np.arange(1, n)
    m[idx, idx - 1] = 1.0
    return TruncatedOperator("transition", n, m)


def shift_operator(chain, n: int) -> TruncatedOperator:
    n = _check_dense_size(n)
    m = np.zeros((n, n))
    idx = np.arange(1, n)
    m[idx, idx - 1] = 1.0
    return TruncatedOperator("shift", n, m)


def jump_operator(chain, z: complex, n: int) -> TruncatedOperator:
    if n > chain.truncation:
        raise TruncationTooSmall("chain prefix shorter than requested dimension")
    n = _check_dense_size(n)
    powers = np.asarray(z, dtype=complex) ** np.arange(1, n + 1)
    m = np.outer(powers, chain.p[1 : n + 1])
    return TruncatedOperator("jump", n, m, z=complex(z))


def factorization_residual(chain, z: complex, n: int) -> float:
    """Max entry defect of (I - zQ)(I - L_z) against (I - zP) with Q the
    bare shift and L_z the return-jump block, over the interior block
    (rows and columns up to N-1; the edge band is excluded because the
    truncated shift has nowhere to send the last state)."""
    if abs(z) > 1.0 + 1e-12:
        raise PreconditionViolated("factorization is probed on the closed unit disk")
    n = _check_dense_size(n)
    eye = np.eye(n, dtype=complex)
    p = transition_operator(chain, n).matrix
    q = shift_operator(chain, n).matrix
    l = jump_operator(chain, z, n).matrix
    lhs = (eye - z * q) @ (eye - l)
    rhs = eye - z * p
    defect = np.abs(lhs - rhs)[: n - 1, : n - 1]
    return float(defect.max())


# ----------------------------------------------------------------------
# eigenvector candidates from the generating-function coefficients
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralProbe:
    """Candidate eigenvector prefix for the transition operator.

    residual is the l1 defect of the eigen relation on interior entries
    (j <= N-1, where the truncated matrix is exact); tail_note is the
    magnitude of the first coefficient beyond the prefix, the exact defect
    the truncation introduces at the edge.
    """

    lam: complex
    vector: np.ndarray
    residual: float
    tail_note: float

    def __post_init__(self):
        self.vector.flags.writeable = False


def eigen_from_gf(chain, lam: complex, n: int) -> SpectralProbe:
    """Coefficient recursion for the candidate left eigenvector at ``lam``.

    With x_1 = 1 the coefficients are x_k = lam^(k-1) - sum_{m<k} p_m
    lam^(k-1-m), computed by the stable one-term recursion
    x_{k+1} = lam x_k - p_k.  At lam = 1 this gives x_k = d_{k-1}, the
    invariant vector; inside the unit disk the prefix is summable and the
    edge defect decays with N.
    """
    n = int(n)
    if n < 3:
        raise TruncationTooSmall("need at least three coefficients")
    if n > chain.truncation:
        raise TruncationTooSmall("chain prefix shorter than requested dimension")
    lam = complex(lam)
    real = lam.imag == 0.0
    x = np.empty(n + 1, dtype=float if real else complex)
    x[0] = 0.0
    x[1] = 1.0
    lam_s = lam.real if real else lam
    for k in range(1, n):
        x[k + 1] = lam_s * x[k] - chain.p[k]
    edge = abs(lam_s * x[n] - chain.p[n])

    # interior residual of the row action: (xP)_j = x_1 p_j + x_{j+1}
    defect = lam_s * x[1 : n] - (x[1] * chain.p[1 : n] + x[2 : n + 1])
    residual = float(np.abs(defect).sum())
    return SpectralProbe(lam=lam, vector=x, residual=residual, tail_note=float(edge))


def partial_norm_scan(chain, lam: complex, n_list) -> np.ndarray:
    """Partial l1 norms of the coefficient vector at each prefix length.

    Inside the disk these settle; on the unit circle away from 1 they grow
    without bound, which is the diagnostic (not a proof) that the candidate
    fails to be a summable eigenvector there.
    """
    n_list = [int(v) for v in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])) or not n_list:
        raise PreconditionViolated("need a strictly increasing list of prefix lengths")
    probe = eigen_from_gf(chain, lam, max(n_list))
    mags = np.abs(probe.vector)
    sums = np.cumsum(mags)
    return np.array([sums[v] for v in n_list])


def disk_scan(chain, lams, n: int) -> list:
    """Residual and partial-norm diagnostics over a grid of disk points.

    Returns rows ``(re, im, residual, l1_partial_norm)``; diagnostic only.
    """
    out = []
    for lam in lams:
        probe = eigen_from_gf(chain, lam, n)
        lam = complex(lam)
        out.append(
            (lam.real, lam.imag, probe.residual, float(np.abs(probe.vector).sum()))
        )
    return out


# ----------------------------------------------------------------------
# generating-function evaluation
# ----------------------------------------------------------------------

def _law_transform(chain, z: complex, start: int = 1) -> complex:
    """sum_{k >= start} p_k z^k over the stored prefix."""
    powers = np.asarray(z, dtype=complex) ** np.arange(start, chain.truncation + 1)
    return complex(np.dot(chain.p[start:], powers))


def gf_evaluate(chain, i: int, j: int, z: complex):
    """Pointwise values (P_ij(z), F_ij(z)) of the pair-visit and
    first-passage generating functions.

    Closed forms from the chain structure: descents are monomials, ascents
    go through the return row.  The renewal identity
    P_ij = F_ij P_jj + delta_ij couples the two values; for well-inside
    points both are cross-checked against direct series evaluation.

    Raises
    ------
    SingularPoint
        At z = 1, where P_jj diverges (the one root of the denominator on
        the closed disk).
    OutOfDomain via PreconditionViolated
        Outside the closed unit disk.
    """
    if i < 1 or j < 1:
        raise PreconditionViolated("states are indexed from 1")
    z = complex(z)
    if abs(z) > 1.0 + 1e-12:
        raise PreconditionViolated("generating functions are evaluated on the closed disk")
    if z == 1.0:
        raise SingularPoint("z = 1 is the singular point of the pair-visit function")
    if z == 0.0:
        return (1.0 if i == j else 0.0), 0.0

    if j > 1:
        head = complex(np.dot(
            chain.p[1:j], np.asarray(z, dtype=complex) ** np.arange(1, j)
        ))
    else:
        head = 0j
    f_jj = _law_transform(chain, z, start=j) / (1.0 - head)
    if i > j:
        f_ij = z ** (i - j)
    else:
        f_ij = z ** (i - j) * f_jj
    p_jj = 1.0 / (1.0 - f_jj)
    p_ij = f_ij * p_jj + (1.0 if i == j else 0.0)

    if abs(z) <= 0.9 and max(i, j) <= 50 and chain.truncation >= max(i, j) + 300:
        _series_check(chain, i, j, z, p_ij)
    if z.imag == 0.0:
        return p_ij.real, f_ij.real
    return p_ij, f_ij


def _series_check(chain, i: int, j: int, z: complex, p_ij: complex):
    """Independent route: coefficients of P_ij as first-passage convolved
    with the return-renewal reciprocal, evaluated by Horner."""
    from .chain import first_passage

    n = min(chain.truncation - j, 400)
    fp = first_passage(chain, i, j, trunc=n, mass_tol=math.inf)
    fjj = fp.series.coeffs if i == j else first_passage(
        chain, j, j, trunc=n, mass_tol=math.inf
    ).series.coeffs
    den = np.zeros(n + 1)
    den[0] = 1.0
    den[1:] -= fjj[1:]
    series = convolve(fp.series, reciprocal(TruncatedSeries(den)))
    val = complex(series.evaluate(z))
    if i == j:
        val += 1.0
    scale = max(1.0, abs(p_ij))
    if abs(val - p_ij) > 1e-8 * scale:
        raise PreconditionViolated(
            f"internal generating-function routes disagree at z={z!r}: "
            f"{p_ij!r} vs {val!r}"
        )
