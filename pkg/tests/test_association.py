"""Association probabilities, serving-distance distributions, cell loads."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hetsplit import (
    AssociationSet,
    DistanceKind,
    NetworkConfig,
    association_probabilities,
    classify,
    distance_pdf,
    loads,
)

DEFAULT = NetworkConfig()

# frozen default-scenario association split (lambda2/lambda1 = 25, bias 30)
A1 = 0.02257271621623369
A2 = 0.8877122902370577
AB = 0.08971499354670875


def test_default_association_probabilities():
    probs = association_probabilities(DEFAULT)
    assert probs.a1 == pytest.approx(A1, rel=1e-12)
    assert probs.a2 == pytest.approx(A2, rel=1e-12)
    assert probs.aB == pytest.approx(AB, rel=1e-12)
    assert probs.as_tuple() == (probs.a1, probs.a2, probs.aB)


def test_macro_probability_closed_form():
    # equal exponents: a1 = lambda1 / (lambda1 + lambda2 * sqrt(btilde)),
    # btilde = bias * p2 / p1 = 3 at the defaults
    assert association_probabilities(DEFAULT).a1 == pytest.approx(
        2.0 / (2.0 + 50.0 * math.sqrt(3.0)), rel=1e-12
    )


def test_closed_and_integral_methods_agree():
    closed = association_probabilities(DEFAULT, method="closed")
    quad = association_probabilities(DEFAULT, method="integral")
    for c, q in zip(closed.as_tuple(), quad.as_tuple()):
        assert c == pytest.approx(q, rel=1e-9, abs=1e-12)


network_strategy = st.builds(
    NetworkConfig,
    lambda1=st.floats(min_value=0.1e-6, max_value=50e-6),
    lambda2=st.floats(min_value=0.1e-6, max_value=300e-6),
    p1=st.floats(min_value=0.5, max_value=100.0),
    p2=st.floats(min_value=0.1, max_value=20.0),
    bias=st.floats(min_value=1.0, max_value=100.0),
)


@given(network_strategy)
@settings(max_examples=100, deadline=None)
def test_association_probabilities_sum_to_one(net):
    probs = association_probabilities(net)
    assert abs(sum(probs.as_tuple()) - 1.0) <= 1e-9
    assert all(p >= 0.0 for p in probs.as_tuple())


@given(
    network_strategy,
    st.floats(min_value=2.2, max_value=6.0),
    st.floats(min_value=2.2, max_value=6.0),
)
@settings(max_examples=40, deadline=None)
def test_sum_to_one_with_unequal_exponents(net, alpha1, alpha2):
    import dataclasses

    mixed = dataclasses.replace(net, alpha1=alpha1, alpha2=alpha2)
    probs = association_probabilities(mixed, method="integral")
    assert abs(sum(probs.as_tuple()) - 1.0) <= 1e-9


def test_bias_moves_users_from_small_to_biased():
    low = association_probabilities(NetworkConfig(bias=1.0))
    high = association_probabilities(NetworkConfig(bias=100.0))
    assert low.aB == pytest.approx(0.0, abs=1e-12)
    assert high.aB > 0.05
    assert high.a1 < low.a1


@pytest.mark.parametrize("kind", list(DistanceKind))
def test_distance_pdfs_are_normalized(kind):
    pdf = distance_pdf(kind, DEFAULT)
    assert pdf.kind is kind
    total, err = integrate.quad(pdf.evaluate, 0.0, np.inf, limit=200)
    assert abs(total - 1.0) <= 1e-7
    assert err < 1e-7


def test_distance_pdf_is_vectorized_and_nonnegative():
    pdf = distance_pdf(DistanceKind.MACRO, DEFAULT)
    r = np.linspace(0.0, 2000.0, 64)
    values = pdf.evaluate(r)
    assert values.shape == r.shape
    assert np.all(values >= 0.0)


def test_classify_regions_at_defaults():
    # weight thresholds at the defaults: small wins below r1 * 0.1^(1/4),
    # macro wins above r1 * 3^(1/4), biased in between
    r1 = 100.0
    assert classify(r1, 40.0, DEFAULT) is AssociationSet.SMALL
    assert classify(r1, 100.0, DEFAULT) is AssociationSet.BIASED
    assert classify(r1, 140.0, DEFAULT) is AssociationSet.MACRO


def test_classify_tie_prefers_macro():
    r1 = 100.0
    tie = r1 * 3.0 ** 0.25
    assert classify(r1, tie, DEFAULT) is AssociationSet.MACRO


def test_classify_without_bias_has_no_biased_set():
    net = NetworkConfig(bias=1.0)
    for r2 in (10.0, 56.0, 57.0, 500.0):
        assert classify(100.0, r2, net) in (AssociationSet.MACRO, AssociationSet.SMALL)


def test_loads_frozen_values():
    est = loads(DEFAULT)
    assert est.n1 == pytest.approx(1.722326918919478, rel=1e-12)
    assert est.n2 == pytest.approx(2.136271731503434, rel=1e-12)
    assert est.nB == pytest.approx(1.1148351917397872, rel=1e-12)


def test_loads_follow_mean_cell_population():
    # each load is 1 + 1.28 * lambda_u * a_j / lambda_j
    probs = association_probabilities(DEFAULT)
    est = loads(DEFAULT)
    assert est.n1 == pytest.approx(1.0 + 1.28 * DEFAULT.lambda_u * probs.a1 / DEFAULT.lambda1)
    assert est.n2 == pytest.approx(1.0 + 1.28 * DEFAULT.lambda_u * probs.a2 / DEFAULT.lambda2)
    assert est.nB == pytest.approx(1.0 + 1.28 * DEFAULT.lambda_u * probs.aB / DEFAULT.lambda2)


def test_loads_never_drop_below_one():
    sparse = NetworkConfig(lambda_u=1e-9)
    est = loads(sparse)
    assert est.n1 >= 1.0 and est.n2 >= 1.0 and est.nB >= 1.0
    assert est.n1 == pytest.approx(1.0, abs=1e-4)
