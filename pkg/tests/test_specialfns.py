"""Special-function building blocks: closed forms, identities, quadrature."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hetsplit import QuadratureError, QuadratureSpec, geometry_factor, hyp_geom_factor, rho

mp.mp.dps = 30


def test_rho_closed_form():
    # rho(a, b) = a + sqrt(b) * arctan(sqrt(b))
    assert rho(1.0, 1.0) == pytest.approx(1.0 + math.pi / 4.0, rel=1e-14)
    assert rho(0.0, 3.0) == pytest.approx(math.sqrt(3) * math.atan(math.sqrt(3)), rel=1e-14)
    assert rho(2.5, 0.0) == pytest.approx(2.5)


@given(st.floats(min_value=0.0, max_value=50.0), st.floats(min_value=0.0, max_value=1e4))
def test_rho_matches_reference(a, b):
    assert rho(a, b) == pytest.approx(a + math.sqrt(b) * math.atan(math.sqrt(b)), rel=1e-12, abs=1e-12)


def test_geometry_factor_at_one():
    # the integral collapses to 4 exactly for equal weights
    assert abs(geometry_factor(1.0) - 4.0) <= 1e-9


def test_geometry_factor_frozen_values():
    assert geometry_factor(2.0) == pytest.approx(1.6706116525694072, rel=1e-10)
    assert geometry_factor(0.5) == pytest.approx(13.364893220555258, rel=1e-10)


def test_geometry_factor_matches_direct_quadrature():
    for x in (0.3, 0.9, 1.0, 1.7, 4.2):
        direct, _ = integrate.quad(
            lambda t: math.sqrt(x * x + 1.0 - 2.0 * x * math.cos(t)) / (x * x), 0.0, math.pi
        )
        assert geometry_factor(x) == pytest.approx(direct, rel=1e-9)


@given(st.floats(min_value=0.05, max_value=20.0))
@settings(max_examples=60)
def test_geometry_factor_reciprocal_identity(x):
    # F(1/x) = x^3 F(x)
    assert geometry_factor(1.0 / x) == pytest.approx(x ** 3 * geometry_factor(x), rel=1e-9)


def test_geometry_factor_large_argument_tail():
    # F(x) approaches pi / x; at x = 1000 the relative gap is far below 0.1%
    assert abs(geometry_factor(1000.0) * 1000.0 / math.pi - 1.0) < 1e-3


def test_geometry_factor_rejects_nonpositive():
    with pytest.raises(ValueError):
        geometry_factor(0.0)
    with pytest.raises(ValueError):
        geometry_factor(-2.0)


def test_hyp_geom_factor_frozen_value():
    assert hyp_geom_factor(3.5, 2.7) == pytest.approx(0.6551790849350487, rel=1e-10)


@given(
    st.floats(min_value=2.05, max_value=8.0),
    st.floats(min_value=0.0, max_value=50.0),
)
@settings(max_examples=80, deadline=None)
def test_hyp_geom_factor_matches_mpmath(alpha, z):
    reference = float(mp.hyp2f1(1.0, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha, -z))
    assert hyp_geom_factor(alpha, z) == pytest.approx(reference, rel=1e-7, abs=1e-12)


@given(st.floats(min_value=0.0, max_value=200.0))
@settings(max_examples=60)
def test_hyp_geom_factor_alpha4_closed_form(z):
    # for exponent 4 the value reduces to arctan(sqrt(z)) / sqrt(z)
    expected = math.atan(math.sqrt(z)) / math.sqrt(z) if z > 0 else 1.0
    assert abs(hyp_geom_factor(4.0, z) - expected) <= 1e-10


def test_hyp_geom_factor_range_and_monotonicity():
    values = [hyp_geom_factor(4.0, z) for z in np.linspace(0.0, 30.0, 40)]
    assert values[0] == pytest.approx(1.0, abs=1e-12)
    assert all(0.0 < v <= 1.0 for v in values)
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_hyp_geom_factor_rejects_bad_arguments():
    with pytest.raises(ValueError):
        hyp_geom_factor(2.0, 1.0)
    with pytest.raises(ValueError):
        hyp_geom_factor(4.0, -0.5)


def test_quadrature_spec_budget_is_enforced():
    # an absurdly tight tolerance with almost no subdivision budget cannot
    # converge, and the failure must surface as QuadratureError, not silence
    starving = QuadratureSpec(rel_tol=1e-16, abs_tol=1e-300, max_subdivisions=1)
    with pytest.raises(QuadratureError):
        geometry_factor(1.0000001, spec=starving)


def test_quadrature_spec_rejects_nonpositive_tolerances():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1e-9)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)
