"""Series algebra: frozen examples, algebraic invariants, decay transfer."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renewallab import (
    BadExponent,
    NegativeCoefficient,
    NonPositiveCoefficient,
    OutOfDomain,
    TruncatedSeries,
    ZeroLeadingCoefficient,
    convolution_power_probe,
    convolve,
    divide,
    kaluza_check,
    partial_sums,
    reciprocal,
    tail_sums,
    zero_diagnostic,
)


def geometric_tail_series(n):
    # d_n = 2^-n for the dyadic geometric law; exact in floating point.
    return TruncatedSeries(2.0 ** -np.arange(n + 1.0))


# -- convolve ----------------------------------------------------------

def test_convolve_delta_is_identity():
    a = TruncatedSeries([1.0, 0.0, 0.0])
    b = TruncatedSeries([3.0, -2.0, 0.5])
    out = convolve(a, b)
    assert np.array_equal(out.coeffs, b.coeffs)


def test_convolve_truncates_to_shorter_operand():
    a = TruncatedSeries([1.0, 1.0])
    b = TruncatedSeries([1.0, 1.0, 1.0, 1.0])
    assert convolve(a, b).truncation_order == 1


def test_convolve_hand_value():
    # (1 + 2z)(3 + z + z^2) = 3 + 7z + 3z^2 + 2z^3, truncated at order 2
    out = convolve([1.0, 2.0, 0.0], [3.0, 1.0, 1.0])
    assert np.allclose(out.coeffs, [3.0, 7.0, 3.0], rtol=0, atol=0)


def test_convolve_renewal_identity_half_half():
    # first-return series (0, 1/2, 1/2) against the occupation series prefix
    # (1, 1/2, 3/4) reproduces the two-step occupation 3/4.
    f = TruncatedSeries([0.0, 0.5, 0.5])
    p11 = TruncatedSeries([1.0, 0.5, 0.75])
    out = convolve(f, p11)
    assert out.coeffs[2] == pytest.approx(0.75, abs=1e-15)


# -- reciprocal --------------------------------------------------------

def test_reciprocal_of_one_minus_half_z():
    out = reciprocal([1.0, -0.5])
    assert np.allclose(out.coeffs, [1.0, 0.5], atol=0)


def test_reciprocal_of_geometric_tails():
    # D(z) = sum 2^-n z^n = 1/(1 - z/2), so 1/D = (1, -1/2, 0, 0, ...)
    out = reciprocal(geometric_tail_series(12))
    expected = np.zeros(13)
    expected[0], expected[1] = 1.0, -0.5
    assert np.allclose(out.coeffs, expected, atol=1e-15)


def test_reciprocal_zero_leading_coefficient():
    with pytest.raises(ZeroLeadingCoefficient):
        reciprocal([0.0, 1.0])
    with pytest.raises(ZeroLeadingCoefficient):
        reciprocal([1e-301, 1.0])


def test_reciprocal_respects_custom_floor():
    with pytest.raises(ZeroLeadingCoefficient):
        reciprocal([1e-8, 1.0], floor=1e-6)


# -- divide ------------------------------------------------------------

def test_divide_hand_value():
    # E = (1, 1), D = (1, -1/2): h_n = 2^-n + 2^-(n-1) = 3 * 2^-n for n >= 1
    out = divide([1.0, 1.0, 0.0, 0.0, 0.0], [1.0, -0.5, 0.0, 0.0, 0.0])
    n = np.arange(1, 5)
    assert out.coeffs[0] == pytest.approx(1.0)
    assert np.allclose(out.coeffs[1:], 3.0 * 2.0 ** -n.astype(float), rtol=1e-15)


def test_divide_self_is_delta():
    d = geometric_tail_series(30)
    out = divide(d, d)
    expected = np.zeros(31)
    expected[0] = 1.0
    assert np.allclose(out.coeffs, expected, atol=1e-14)


def test_divide_matches_convolve_with_reciprocal_exactly():
    rng = np.random.default_rng(7)
    e = TruncatedSeries(rng.normal(size=50))
    d = TruncatedSeries(np.r_[1.0, rng.normal(size=49) * 0.3])
    lhs = divide(e, d)
    rhs = convolve(e, reciprocal(d))
    assert np.array_equal(lhs.coeffs, rhs.coeffs)


# -- tail_sums ---------------------------------------------------------

def test_tail_sums_point_mass():
    out = tail_sums([1.0, 0.0, 0.0])
    assert np.array_equal(out.coeffs, [1.0, 0.0, 0.0, 0.0])


def test_tail_sums_finite_law():
    out = tail_sums([0.5, 0.3, 0.2])
    assert np.allclose(out.coeffs, [1.0, 0.5, 0.2, 0.0], atol=1e-15)


def test_tail_sums_geometric_halving():
    p = TruncatedSeries(2.0 ** -np.arange(1.0, 21.0))
    out = tail_sums(p, analytic_tail=2.0 ** -20)
    assert np.allclose(out.coeffs, 2.0 ** -np.arange(21.0), rtol=1e-14)


def test_tail_sums_analytic_tail_enters_every_entry():
    out = tail_sums([0.5, 0.25], analytic_tail=0.25)
    assert np.allclose(out.coeffs, [1.0, 0.5, 0.25], atol=1e-15)


def test_tail_sums_nonincreasing_postcondition():
    rng = np.random.default_rng(3)
    a = rng.uniform(size=200)
    out = tail_sums(a).coeffs
    assert np.all(out[:-1] >= out[1:])


def test_tail_sums_rejects_negative():
    with pytest.raises(NegativeCoefficient):
        tail_sums([0.5, -0.1])
    with pytest.raises(NegativeCoefficient):
        tail_sums([0.5, 0.5], analytic_tail=-1e-3)


# -- partial_sums ------------------------------------------------------

def test_partial_sums_alternating_halves():
    c = TruncatedSeries((-0.5) ** np.arange(6.0))
    out = partial_sums(c)
    expected = np.array([1.0, 0.5, 0.75, 0.625, 0.6875, 0.65625])
    assert np.array_equal(out.coeffs, expected)


def test_partial_sums_of_geometric_reciprocal():
    out = partial_sums(reciprocal(geometric_tail_series(10)))
    assert out.coeffs[0] == 1.0
    assert np.allclose(out.coeffs[1:], 0.5, atol=1e-15)


# -- evaluate ----------------------------------------------------------

def test_evaluate_geometric_reciprocal_near_one():
    c = reciprocal(geometric_tail_series(50))
    assert c.evaluate(0.99) == pytest.approx(1.0 - 0.495, abs=1e-12)


def test_evaluate_tail_series_at_one_gives_mean():
    # p = (1/2, 1/2): D(1) = 1 + 1/2 = 3/2, the mean return time.
    d = tail_sums([0.5, 0.5])
    assert d.evaluate(1.0) == pytest.approx(1.5, abs=1e-15)


def test_evaluate_complex_point():
    s = TruncatedSeries([1.0, 1.0])
    assert s.evaluate(0.5j) == pytest.approx(1.0 + 0.5j)


def test_evaluate_outside_disk():
    s = TruncatedSeries([1.0, 1.0])
    with pytest.raises(OutOfDomain):
        s.evaluate(1.001)


# -- kaluza_check ------------------------------------------------------

def test_kaluza_geometric_is_boundary_false():
    p = 2.0 ** -np.arange(1.0, 30.0)
    assert kaluza_check(p) is False


def test_kaluza_cubic_tail_true():
    n = np.arange(1.0, 200.0)
    p = n ** -3.0
    p /= p.sum()
    assert kaluza_check(p) is True


def test_kaluza_flat_pair_false():
    assert kaluza_check([0.5, 0.5]) is False


def test_kaluza_rejects_nonpositive():
    with pytest.raises(NonPositiveCoefficient):
        kaluza_check([0.5, 0.0, 0.5])


# -- convolution_power_probe -------------------------------------------

def test_convpower_gamma_between_one_and_two_levels_off():
    # gamma = 3/2: the sum converges to the beta integral value pi.
    v1, regime = convolution_power_probe(1.5, 4096)
    v2, _ = convolution_power_probe(1.5, 16384)
    assert regime == "n^(3-2g)"
    assert v2 == pytest.approx(np.pi, rel=1e-2)
    assert abs(v2 - np.pi) < abs(v1 - np.pi)


def test_convpower_gamma_two_log_over_n():
    n = 16384
    v, regime = convolution_power_probe(2.0, n)
    assert regime == "log(n)/n"
    assert v * n / np.log(n) == pytest.approx(2.0, rel=8e-2)


def test_convpower_gamma_three_edge_dominated():
    n = 16384
    v, regime = convolution_power_probe(3.0, n)
    assert regime == "n^(1-g)"
    # edges contribute 2 * zeta(2) / n^2
    assert v * n ** 2 == pytest.approx(2.0 * np.pi ** 2 / 6.0, rel=2e-3)


def test_convpower_rejects_gamma_at_most_one():
    with pytest.raises(BadExponent):
        convolution_power_probe(1.0, 100)
    with pytest.raises(BadExponent):
        convolution_power_probe(0.5, 100)


# -- decay transfer through the reciprocal ------------------------------

@pytest.mark.parametrize("gamma", [2.0, 3.0])
def test_reciprocal_preserves_power_decay(gamma):
    # d_n = n^-gamma prefix: coefficients of 1/D must decay with the same
    # exponent; fitted slope over [1e3, 1e4] within 0.3 of -gamma.
    n_max = 10_000
    n = np.arange(1.0, n_max + 1.0)
    d = np.r_[1.0, n ** -gamma]
    c = reciprocal(d).coeffs
    grid = np.unique(np.logspace(3, 4, 25).astype(int))
    slope = np.polyfit(np.log(grid), np.log(np.abs(c[grid])), 1)[0]
    assert abs(slope + gamma) < 0.3


def test_reciprocal_partial_sums_eventually_monotone_for_kaluza_input():
    # For a strictly log-convex decreasing prefix the running sums of 1/D
    # approach their limit from one side after a finite burn-in.
    n = np.arange(1.0, 2001.0)
    p = n ** -3.0
    p /= p.sum()
    assert kaluza_check(p)
    d = tail_sums(p).coeffs[:-1]
    s = partial_sums(reciprocal(d)).coeffs
    # stay away from the truncation edge, where the cut-off law's cliff
    # perturbs the far coefficients at the 1e-10 level
    diffs = np.diff(s[10:1000])
    assert np.all(diffs <= 0.0) or np.all(diffs >= 0.0)


# -- zero diagnostic ----------------------------------------------------

def test_zero_diagnostic_reports_known_root():
    # D = 1 - 2z has its root at z = 1/2.
    out = zero_diagnostic([1.0, -2.0])
    assert out["smallest_root_modulus"] == pytest.approx(0.5, abs=1e-12)
    assert out["min_abs"] < 0.1


def test_zero_diagnostic_disk_clean_for_geometric_tails():
    out = zero_diagnostic(geometric_tail_series(64), radii=np.linspace(0.1, 0.99, 8))
    assert out["min_abs"] > 0.5


# -- serialization -----------------------------------------------------

def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    s = TruncatedSeries(rng.normal(size=40) * 10.0 ** rng.integers(-12, 3, size=40))
    path = tmp_path / "series.csv"
    s.to_csv(path)
    back = TruncatedSeries.from_csv(path)
    assert np.array_equal(back.coeffs, s.coeffs)


# -- property tests -----------------------------------------------------

finite_coeffs = st.lists(
    st.floats(min_value=-100.0, max_value=100.0, allow_nan=False),
    min_size=1,
    max_size=30,
)


@given(finite_coeffs, finite_coeffs)
@settings(max_examples=200, deadline=None)
def test_convolve_commutes(a, b):
    lhs = convolve(a, b).coeffs
    rhs = convolve(b, a).coeffs
    scale = 1.0 + np.max(np.abs(lhs))
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale)


@given(finite_coeffs, finite_coeffs, finite_coeffs)
@settings(max_examples=200, deadline=None)
def test_convolve_associates(a, b, c):
    lhs = convolve(convolve(a, b), c).coeffs
    rhs = convolve(a, convolve(b, c)).coeffs
    scale = 1.0 + np.max(np.abs(lhs))
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale)


# Denominators with a well-separated leading term and geometric decay keep
# the reciprocal's coefficient growth tame, which the round-trip bound needs.
tame_denominators = st.builds(
    lambda lead, rest: np.r_[lead, np.asarray(rest) * 0.4 * abs(lead) * 0.7 ** np.arange(len(rest))]
    if rest
    else np.array([lead]),
    st.floats(min_value=0.1, max_value=10.0).flatmap(
        lambda m: st.sampled_from([m, -m])
    ),
    st.lists(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False), max_size=25),
)


@given(tame_denominators)
@settings(max_examples=200, deadline=None)
def test_reciprocal_round_trip(d):
    back = reciprocal(reciprocal(d)).coeffs
    assert np.all(np.abs(back - d) <= 1e-10 * (1.0 + np.abs(d)))


@given(tame_denominators, finite_coeffs)
@settings(max_examples=100, deadline=None)
def test_divide_then_multiply_recovers_numerator(d, e):
    n = min(len(d), len(e))
    h = divide(e, d)
    back = convolve(h, d).coeffs
    scale = 1.0 + float(np.max(np.abs(np.asarray(e)[:n])))
    assert np.all(np.abs(back - np.asarray(e)[:n]) <= 1e-9 * scale)
