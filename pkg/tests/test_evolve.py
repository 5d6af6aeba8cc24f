import math

import numpy as np
import pytest

import renewallab as rl
from renewallab import (
    DivergentPairing,
    FiniteLaw,
    GeometricLaw,
    InfiniteDegree,
    NotNullRecurrent,
    NotPositiveRecurrent,
    Observable,
    PreconditionViolated,
    RateCurve,
    TruncatedSeries,
    TruncationTooSmall,
    ZeroValueInWindow,
    ZetaTailLaw,
    build_chain,
    correlation_constant,
    correlation_curve,
    deviation_tail_ratio,
    distance_curve,
    from_weights,
    indicator,
    log_grid,
    nonuniformity_probe,
    null_recurrent_ratio,
    ones,
    partial_sums,
    point_mass,
    rate_fit,
    reciprocal,
    renewal_sequence,
    stationary,
    step,
)


def geo_chain(n=500):
    return build_chain(GeometricLaw(0.5), n)


# ----------------------------------------------------------------------
# step
# ----------------------------------------------------------------------

def test_step_point_mass_two_descends_to_one():
    ch = geo_chain()
    out = step(ch, point_mass(2))
    assert out.weights[1] == 1.0
    assert out.weights[2:].sum() == 0.0
    assert out.tail_mass == 0.0


def test_step_point_mass_one_spreads_as_return_law():
    ch = geo_chain()
    out = step(ch, point_mass(1))
    assert np.array_equal(out.weights, ch.p)
    assert out.tail_mass == ch.d[ch.truncation]


def test_step_fixes_stationary_law_on_interior():
    for law in (GeometricLaw(0.5), FiniteLaw((0.5, 0.5)), ZetaTailLaw(1.0)):
        ch = build_chain(law, 400)
        out = step(ch, stationary(ch))
        interior = np.abs(out.weights[1:-1] - ch.pi[1:-1])
        assert interior.max() < 1e-12, law


def test_step_conserves_total_mass():
    ch = build_chain(ZetaTailLaw(1.0), 2000)
    nu = point_mass(1)
    for _ in range(200):
        nu = step(ch, nu)
    assert nu.total_mass == pytest.approx(1.0, abs=1e-12)
    assert nu.tail_mass > 0.0


def test_long_run_mass_conservation():
    # ten thousand exact steps: totals drift only at the rounding level
    ch = build_chain(ZetaTailLaw(1.0), 1500)
    w = np.zeros(ch.truncation + 1)
    w[1] = 1.0
    from renewallab.evolve import _step_inplace

    buf = np.empty_like(w)
    tail = 0.0
    for _ in range(10000):
        tail = _step_inplace(ch, w, buf, tail)
        w, buf = buf, w
    assert w[1:].sum() + tail == pytest.approx(1.0, abs=1e-9)


# ----------------------------------------------------------------------
# renewal sequence
# ----------------------------------------------------------------------

def test_renewal_single_state_law_is_constant_one():
    ch = build_chain(FiniteLaw((1.0,)), 10)
    e = renewal_sequence(ch, 8)
    assert np.array_equal(e.values, np.ones(9))


def test_renewal_geometric_is_exactly_half():
    e = renewal_sequence(geo_chain(), 200)
    assert e.values[0] == 1.0
    assert np.array_equal(e.values[1:], np.full(200, 0.5))


def test_renewal_half_half_hand_values():
    ch = build_chain(FiniteLaw((0.5, 0.5)), 50)
    e = renewal_sequence(ch, 5)
    assert e.values.tolist() == [1.0, 0.5, 0.75, 0.625, 0.6875, 0.65625]
    far = renewal_sequence(ch, 50).values[-1]
    assert far == pytest.approx(2.0 / 3.0, abs=1e-12)


@pytest.mark.parametrize(
    "law", [GeometricLaw(0.5), FiniteLaw((0.5, 0.5)), ZetaTailLaw(1.0)]
)
def test_renewal_two_routes_agree(law):
    # convolution recursion versus partial sums of the reciprocal of the
    # survival series: two independent routes to the same sequence
    ch = build_chain(law, 400)
    ea = renewal_sequence(ch, 300).values
    eb = partial_sums(reciprocal(TruncatedSeries(ch.d[:301]))).coeffs
    assert np.max(np.abs(ea - eb)) < 1e-10


def test_renewal_needs_prefix():
    with pytest.raises(TruncationTooSmall):
        renewal_sequence(geo_chain(100), 200)


# ----------------------------------------------------------------------
# distance curves
# ----------------------------------------------------------------------

def test_distance_hand_value_half_half():
    ch = build_chain(FiniteLaw((0.5, 0.5)), 50)
    d = distance_curve(ch, point_mass(1), [1])
    assert d.values[0] == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert d.bounds[0] == 0.0


def test_distance_from_stationary_is_zero_for_finite_laws():
    ch = build_chain(FiniteLaw((0.5, 0.5)), 100)
    d = distance_curve(ch, stationary(ch), [1, 5, 20])
    assert np.array_equal(d.values, np.zeros(3))


def test_distance_from_stationary_stays_below_reported_noise():
    # starting exactly at pi, every curve value is pure truncation residue
    # and must sit inside the reported uncertainty of zero
    ch = build_chain(ZetaTailLaw(1.0), 2000)
    d = distance_curve(ch, stationary(ch), [10, 100])
    assert np.all(d.values <= d.bounds + 1e-12)
    assert np.all(d.values < 1e-3)


def test_distance_bounded_by_two():
    ch = build_chain(ZetaTailLaw(1.0), 1000)
    d = distance_curve(ch, point_mass(200), log_grid(1, 200, 12))
    assert np.all(d.values <= 2.0 + 1e-12)


def test_distance_horizon_gate():
    ch = build_chain(ZetaTailLaw(1.0), 100)
    with pytest.raises(TruncationTooSmall):
        distance_curve(ch, point_mass(1), [50])
    distance_curve(ch, point_mass(1), [49])


def test_distance_needs_stationary_law():
    ch = build_chain(ZetaTailLaw(-0.5), 100)
    with pytest.raises(NotPositiveRecurrent):
        distance_curve(ch, point_mass(1), [10])


def test_distance_slope_matches_degree():
    ch = build_chain(ZetaTailLaw(1.5), 6000)
    d = distance_curve(ch, point_mass(1), log_grid(100, 2500, 15))
    fit = rate_fit(d, (100, 2500))
    assert fit.exponent == pytest.approx(-1.5, abs=0.2)


# ----------------------------------------------------------------------
# correlation curves
# ----------------------------------------------------------------------

def test_correlation_with_ones_vanishes():
    ch = build_chain(ZetaTailLaw(1.0), 500)
    c = correlation_curve(ch, point_mass(1), ones(5), [1, 10, 100])
    assert np.max(np.abs(c.values)) < 1e-12


def test_correlation_from_stationary_vanishes():
    ch = geo_chain()
    c = correlation_curve(ch, stationary(ch), indicator(1, 2), [1, 5, 25])
    assert np.max(np.abs(c.values)) < 1e-14


def test_correlation_bilinear_in_observable():
    ch = build_chain(FiniteLaw((0.3, 0.3, 0.4)), 200)
    rng = np.random.default_rng(7)
    a = rng.normal(size=6)
    b = rng.normal(size=6)
    grid = [1, 3, 9, 27]
    ua = Observable(np.concatenate(([0.0], a)))
    ub = Observable(np.concatenate(([0.0], b)))
    uc = Observable(np.concatenate(([0.0], 2.5 * a - b)))
    nu = point_mass(2)
    ca = correlation_curve(ch, nu, ua, grid).values
    cb = correlation_curve(ch, nu, ub, grid).values
    cc = correlation_curve(ch, nu, uc, grid).values
    assert np.max(np.abs(cc - (2.5 * ca - cb))) < 1e-10


def test_correlation_linear_in_signed_deviation():
    ch = build_chain(FiniteLaw((0.3, 0.3, 0.4)), 200)
    w = np.zeros(5)
    w[0], w[2] = 0.05, -0.05
    base = stationary(ch).weights[1:6]
    nu1 = from_weights(base + w, probability=False)
    nu2 = from_weights(base + 2.0 * w, probability=False)
    u = indicator([1, 3], size=4)
    grid = [1, 2, 5, 10]
    c1 = correlation_curve(ch, nu1, u, grid).values
    c2 = correlation_curve(ch, nu2, u, grid).values
    assert np.max(np.abs(c2 - 2.0 * c1)) < 1e-10


# ----------------------------------------------------------------------
# deviation-to-tail ratio
# ----------------------------------------------------------------------

def test_deviation_tail_ratio_rejects_geometric():
    with pytest.raises(InfiniteDegree):
        deviation_tail_ratio(geo_chain(), [10, 100])


def test_deviation_tail_ratio_approaches_one():
    ch = build_chain(ZetaTailLaw(1.0), 3000)
    r = deviation_tail_ratio(ch, [300, 3000])
    assert abs(r.values[1] - 1.0) < abs(r.values[0] - 1.0)
    assert 0.9 < r.values[1] < 1.1


def test_deviation_tail_ratio_null_chain_rejected():
    ch = build_chain(ZetaTailLaw(-0.5), 100)
    with pytest.raises(NotPositiveRecurrent):
        deviation_tail_ratio(ch, [10])


# ----------------------------------------------------------------------
# rate fits
# ----------------------------------------------------------------------

def test_rate_fit_exact_power_law():
    n = log_grid(10, 10000, 25)
    fit = rate_fit(RateCurve(n, n.astype(float) ** -2.0), (10, 10000))
    assert fit.exponent == pytest.approx(-2.0, abs=1e-9)
    assert fit.rms_residual < 1e-12


def test_rate_fit_constant():
    n = log_grid(10, 1000, 12)
    fit = rate_fit(RateCurve(n, np.full(n.size, 0.7)), (10, 1000))
    assert fit.exponent == pytest.approx(0.0, abs=1e-9)


def test_rate_fit_log_corrected_power():
    n = log_grid(1000, 10000, 20)
    vals = np.log(n) / n
    fit = rate_fit(RateCurve(n, vals), (1000, 10000))
    assert -1.05 <= fit.exponent <= -0.85


def test_rate_fit_zero_value_rejected():
    n = np.array([10, 20, 40])
    with pytest.raises(ZeroValueInWindow):
        rate_fit(RateCurve(n, np.array([1.0, 0.0, 0.25])), (10, 40))


def test_rate_fit_narrow_window_rejected():
    n = np.array([10, 20, 40])
    with pytest.raises(PreconditionViolated):
        rate_fit(RateCurve(n, np.ones(3)), (15, 19))


# ----------------------------------------------------------------------
# sharp correlation constant
# ----------------------------------------------------------------------

def test_correlation_constant_guards():
    ch = build_chain(ZetaTailLaw(1.0), 500)
    with pytest.raises(PreconditionViolated):
        correlation_constant(ch, point_mass(1), ones(3), [10])
    with pytest.raises(PreconditionViolated):
        correlation_constant(ch, stationary(ch), indicator(1, 2), [10])
    with pytest.raises(InfiniteDegree):
        correlation_constant(geo_chain(), point_mass(1), indicator(1, 2), [10])


def test_correlation_constant_prediction_formula():
    ch = build_chain(ZetaTailLaw(1.0), 2200)
    curve, predicted = correlation_constant(
        ch, point_mass(1), indicator(1, 1), log_grid(10, 1000, 10)
    )
    assert predicted == pytest.approx(ch.pi1 ** 2 / 2.0, rel=1e-12)
    assert curve.values[-1] == pytest.approx(predicted, rel=0.2)


# ----------------------------------------------------------------------
# null-recurrent ratio
# ----------------------------------------------------------------------

def test_null_ratio_guards():
    pos = build_chain(ZetaTailLaw(1.0), 200)
    with pytest.raises(NotNullRecurrent):
        null_recurrent_ratio(pos, point_mass(1), indicator(1, 1), [10])
    nul = build_chain(ZetaTailLaw(-0.5), 200)
    with pytest.raises(DivergentPairing):
        null_recurrent_ratio(nul, point_mass(1), ones(3), [10])


def test_null_ratio_delta_one_is_exactly_one():
    ch = build_chain(ZetaTailLaw(-0.5), 2100)
    r = null_recurrent_ratio(ch, point_mass(1), indicator(1, 1), [1, 10, 100, 1000])
    assert np.array_equal(r.values, np.ones(4))


def test_null_ratio_delta_two_shift():
    ch = build_chain(ZetaTailLaw(-0.5), 2100)
    grid = [10, 100, 1000]
    r = null_recurrent_ratio(ch, point_mass(2), indicator(1, 2), grid)
    e = renewal_sequence(ch, 1000).values
    expected = e[np.array(grid) - 1] / e[np.array(grid)]
    assert np.allclose(r.values, expected, rtol=1e-12)
    assert abs(r.values[-1] - 1.0) < 0.05


# ----------------------------------------------------------------------
# nonuniformity
# ----------------------------------------------------------------------

def test_nonuniformity_pure_descent_and_start():
    ch = build_chain(ZetaTailLaw(1.0), 2100)
    probe = nonuniformity_probe(ch, [5, 1500], n=100)
    assert probe[1500] == 2.0 * (1.0 - ch.pi[1400])
    evolved = distance_curve(ch, point_mass(5), [100]).values[0]
    assert probe[5] == pytest.approx(evolved, rel=1e-12)
    at_zero = nonuniformity_probe(ch, [7], n=0)
    assert at_zero[7] == 2.0 * (1.0 - ch.pi[7])


def test_nonuniformity_exhibits_state_dependence():
    ch = build_chain(ZetaTailLaw(1.0), 2100)
    probe = nonuniformity_probe(ch, [1, 2000], n=100)
    assert probe[2000] > probe[1]
    assert probe[2000] > 1.9


# ----------------------------------------------------------------------
# grids
# ----------------------------------------------------------------------

def test_log_grid_strictly_increasing_ints():
    g = log_grid(1, 10000, 40)
    assert g[0] == 1 and g[-1] == 10000
    assert np.all(np.diff(g) > 0)
    assert g.dtype.kind == "i"


def test_curve_accessor():
    c = RateCurve(np.array([1, 5, 9]), np.array([0.3, 0.2, 0.1]))
    assert c.at(5) == 0.2
    with pytest.raises(KeyError):
        c.at(4)
