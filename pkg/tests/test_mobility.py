"""Handover rates on the weighted tessellation and their delay costs."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hetsplit import (
    NetworkConfig,
    Scenario,
    asymptotic_gain,
    conventional_cost,
    handover_rates,
    numeric_gain,
    split_cost,
    with_mobility,
    with_network,
)
from hetsplit.config import KMH_TO_MS, PER_KM2

DEFAULTS = Scenario()

# frozen per-km crossing rates for lambda1 = 2 per km^2, bias 30
FROZEN_RATES = {
    10.0: dict(ho11=0.059971138760990125, ho12=0.4693150576996303,
               ho22=3.4176158504822785, intra=2.615584472328317),
    50.0: dict(ho11=0.006106619342200171, ho12=0.2389423035934223,
               ho22=8.700051177926143, intra=7.3834097721409755),
    150.0: dict(ho11=0.0012022552524396115, ho12=0.14112700829738195,
                ho22=15.415589993608355, intra=13.898413633141347),
}
INTER_ANCHOR_PER_KM = 1.8006326323142121


def _net(lam2_per_km2):
    return with_network(DEFAULTS, lambda2=lam2_per_km2 * PER_KM2).network


@pytest.mark.parametrize("lam2", sorted(FROZEN_RATES))
def test_handover_rates_frozen(lam2):
    r = handover_rates(_net(lam2))
    want = FROZEN_RATES[lam2]
    per_km = 1e3
    assert r.conv[0, 0] * per_km == pytest.approx(want["ho11"], rel=1e-10)
    assert r.conv[0, 1] * per_km == pytest.approx(want["ho12"], rel=1e-10)
    assert r.conv[1, 1] * per_km == pytest.approx(want["ho22"], rel=1e-10)
    assert r.inter_anchor * per_km == pytest.approx(INTER_ANCHOR_PER_KM, rel=1e-10)
    assert r.intra_anchor * per_km == pytest.approx(want["intra"], rel=1e-10)
    assert not r.clamped


def test_anchor_rate_closed_form():
    # the anchor tessellation is the unweighted macro Voronoi diagram, whose
    # boundary crossing rate is 4 sqrt(lambda1) / pi per unit length
    r = handover_rates(DEFAULTS.network)
    assert r.inter_anchor == pytest.approx(4.0 * math.sqrt(2e-6) / math.pi, rel=1e-12)


def test_cross_tier_rates_are_symmetric():
    for lam2 in (2.0, 50.0, 400.0):
        r = handover_rates(_net(lam2))
        assert abs(r.conv[0, 1] - r.conv[1, 0]) <= 1e-9 * r.conv[0, 1]


def test_rate_bookkeeping_identity():
    # inter-anchor + intra-anchor crossings partition all cell crossings
    for lam2 in (10.0, 50.0, 150.0):
        r = handover_rates(_net(lam2))
        assert r.total == pytest.approx(float(np.sum(r.conv)), rel=1e-14)
        assert r.inter_anchor + r.intra_anchor == pytest.approx(r.total, abs=1e-12)


def test_rate_trends_in_small_cell_density():
    grid = np.linspace(1.0, 300.0, 25)
    totals, ho11s = [], []
    for lam2 in grid:
        r = handover_rates(_net(lam2))
        totals.append(r.total)
        ho11s.append(float(r.conv[0, 0]))
    assert all(a <= b + 1e-15 for a, b in zip(totals, totals[1:]))
    assert all(a >= b - 1e-15 for a, b in zip(ho11s, ho11s[1:]))


def test_single_tier_limit():
    r = handover_rates(NetworkConfig(lambda2=0.0))
    assert float(r.conv[0, 1]) == 0.0 and float(r.conv[1, 0]) == 0.0
    assert float(r.conv[1, 1]) == 0.0
    assert float(r.conv[0, 0]) == pytest.approx(r.inter_anchor, rel=1e-12)
    assert r.intra_anchor == pytest.approx(0.0, abs=1e-15)
    assert not r.clamped


def test_intra_anchor_never_negative():
    for lam2 in (1e-6, 0.01, 0.5, 5.0, 1000.0):
        r = handover_rates(_net(lam2))
        assert r.intra_anchor >= 0.0


def test_unequal_exponents_rejected():
    import dataclasses

    net = dataclasses.replace(DEFAULTS.network, alpha1=3.5)
    with pytest.raises(ValueError):
        handover_rates(net)


def test_costs_vanish_when_static():
    assert conventional_cost(DEFAULTS).value == 0.0
    assert split_cost(DEFAULTS).value == 0.0


def test_costs_scale_exactly_linearly_with_velocity():
    scn = with_mobility(with_network(DEFAULTS, lambda2=150.0 * PER_KM2),
                        velocity=50.0 * KMH_TO_MS)
    doubled = with_mobility(scn, velocity=100.0 * KMH_TO_MS)
    assert conventional_cost(doubled).value == 2.0 * conventional_cost(scn).value
    assert split_cost(doubled).value == 2.0 * split_cost(scn).value


def test_conventional_cost_frozen_at_high_speed():
    scn = with_mobility(with_network(DEFAULTS, lambda2=150.0 * PER_KM2),
                        velocity=360.0 * KMH_TO_MS)
    assert conventional_cost(scn).value == pytest.approx(1.098933238581889, rel=1e-10)
    assert conventional_cost(scn).value >= 1.0
    assert split_cost(scn).value == pytest.approx(0.6124887614219419, rel=1e-10)


def test_conventional_cost_mixes_delays_linearly():
    base = with_mobility(with_network(DEFAULTS, lambda2=50.0 * PER_KM2),
                         velocity=30.0)
    no_x2 = conventional_cost(with_mobility(base, prob_x2_conv=0.0)).value
    all_x2 = conventional_cost(with_mobility(base, prob_x2_conv=1.0)).value
    half = conventional_cost(with_mobility(base, prob_x2_conv=0.5)).value
    assert all_x2 == pytest.approx(no_x2 / 2.0, rel=1e-12)  # default delays halve over X2
    assert half == pytest.approx(0.5 * (no_x2 + all_x2), rel=1e-12)


def test_split_cost_single_tier_reduces_to_anchor_crossings():
    scn = with_mobility(
        with_network(DEFAULTS, lambda2=1e-12), velocity=20.0, prob_x2_split=0.0
    )
    rates = handover_rates(scn.network)
    expected = 20.0 * rates.inter_anchor * scn.mobility.d_inter_anchor
    # the vanishing tier leaves a ~1e-7 relative residue of intra-anchor cost
    assert rates.intra_anchor < 1e-6 * rates.inter_anchor
    assert split_cost(scn).value == pytest.approx(expected, rel=1e-5)


def test_uniform_delays_collapse_the_two_architectures():
    scn = with_mobility(
        with_network(DEFAULTS, lambda2=80.0 * PER_KM2),
        velocity=40.0, d_conv=0.5, d_conv_x2=0.5,
        d_inter_anchor=0.5, d_inter_anchor_x2=0.5, d_intra_anchor=0.5,
    )
    assert split_cost(scn).value == pytest.approx(conventional_cost(scn).value, rel=1e-12)


@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=25, deadline=None)
def test_split_cost_bounded_by_delay_extremes(x, z):
    scn = with_mobility(
        with_network(DEFAULTS, lambda2=150.0 * PER_KM2),
        velocity=30.0, prob_x2_conv=x, prob_x2_split=z,
    )
    fast = with_mobility(scn, prob_x2_conv=1.0, prob_x2_split=1.0)
    slow = with_mobility(scn, prob_x2_conv=0.0, prob_x2_split=0.0)
    assert split_cost(fast).value - 1e-15 <= split_cost(scn).value <= split_cost(slow).value + 1e-15
    assert conventional_cost(fast).value - 1e-15 <= conventional_cost(scn).value


def test_asymptotic_gain_closed_form():
    assert asymptotic_gain(DEFAULTS.mobility) == pytest.approx(0.5, rel=1e-12)
    fast_core = with_mobility(DEFAULTS, d_intra_anchor=0.14).mobility
    assert asymptotic_gain(fast_core) == pytest.approx(0.8, rel=1e-12)
    uniform = with_mobility(DEFAULTS, d_intra_anchor=0.7).mobility
    assert asymptotic_gain(uniform) == pytest.approx(0.0, abs=1e-15)


def test_numeric_gain_approaches_closed_form():
    # at lambda2 = 10^4 lambda1 the surviving anchor crossings shave about
    # 1e-4 off the closed-form ratio
    closed = asymptotic_gain(DEFAULTS.mobility)
    numeric = numeric_gain(DEFAULTS)
    assert numeric == pytest.approx(0.4950002535799353, rel=1e-10)
    assert abs(numeric - closed) / closed < 0.01
    fast_core = with_mobility(DEFAULTS, d_intra_anchor=0.14)
    assert abs(numeric_gain(fast_core) - 0.8) / 0.8 < 0.01


def test_numeric_gain_zero_when_delays_match():
    uniform = with_mobility(DEFAULTS, d_intra_anchor=0.7, d_inter_anchor=0.7,
                            d_conv=0.7, d_conv_x2=0.35, d_inter_anchor_x2=0.35)
    assert numeric_gain(uniform) == pytest.approx(0.0, abs=1e-9)
