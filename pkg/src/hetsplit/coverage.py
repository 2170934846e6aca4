"""Coverage probability (SINR CCDF) and per-link spectral efficiency.

Eight link types cover the two architectures. In the conventional
architecture both tiers share one band: macro and unbiased small users see
cross-tier interference, while biased users are scheduled in protected
subframes during which the macro tier is silent. In the split architecture
the tiers transmit on disjoint bands, so every link sees interference only
from its serving tier; the control links describe the macro anchor serving
users whose data comes from a small cell.

All analytical results here are interference-limited: thermal noise is
ignored regardless of the configured noise power (the embedded simulator
does honor it, which is one of the things validation checks).

Coverage is C(theta) = P(SIR > theta). Spectral efficiency is the mean of
ln(1 + SIR) in nats/s/Hz, obtained as the integral of C(t)/(1 + t).
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .association import AssociationProbabilities, association_probabilities
from .config import NetworkConfig, derived_ratios
from .specialfns import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    decay_cutoff,
    hyp_geom_factor,
    integrate_interval,
    integrate_semi_infinite,
    rho,
)


class LinkType(Enum):
    CONV_MACRO = "conv_macro"      # macro-served user, shared band
    CONV_SMALL = "conv_small"      # small-served (unbiased) user, shared band
    CONV_BIASED = "conv_biased"    # biased user in protected subframes
    SPLIT_MACRO = "split_macro"    # macro-served user, macro-only band
    SPLIT_DATA2 = "split_data2"    # small data link, small-only band
    SPLIT_CTRL2 = "split_ctrl2"    # anchor control link of an unbiased small-cell user
    SPLIT_DATA_B = "split_data_b"  # biased data link (identical to CONV_BIASED)
    SPLIT_CTRL_B = "split_ctrl_b"  # anchor control link of a biased user


#: Links whose statistics condition on the biased association set.
BIASED_LINKS = frozenset({LinkType.CONV_BIASED, LinkType.SPLIT_DATA_B,
                          LinkType.SPLIT_CTRL_B})


def _require_closed_form(net: NetworkConfig) -> None:
    if not (net.alpha1 == 4.0 and net.alpha2 == 4.0):
        raise ValueError("closed-form coverage requires alpha1 == alpha2 == 4")


def _check_biased_set(link: LinkType, aB: float) -> None:
    if link in BIASED_LINKS and aB <= 0.0:
        raise ValueError("biased set is empty; biased links require bias > 1")


def _coverage_closed(link: LinkType, theta: float, net: NetworkConfig) -> float:
    """Path-loss-exponent-4 closed forms; exact for alpha1 = alpha2 = 4."""
    ratios = derived_ratios(net)
    l1, l2 = net.lambda1, net.lambda2
    rt = rho(1.0, theta)
    s21t = math.sqrt(ratios.p21_tilde)
    s21 = math.sqrt(ratios.p21)
    s12 = math.sqrt(ratios.p12)
    s12t = math.sqrt(ratios.p12_tilde)

    if link is LinkType.CONV_MACRO:
        return (l1 + l2 * s21t) / (l1 * rt + l2 * s21t * rho(1.0, theta / net.bias))
    if link is LinkType.CONV_SMALL:
        # The macro interference enhancement cancels the association void
        # exactly, leaving a density- and power-free law.
        return 1.0 / rt
    if link in (LinkType.CONV_BIASED, LinkType.SPLIT_DATA_B):
        aB = l2 / (l2 + l1 * s12t) - l2 / (l2 + l1 * s12)
        _check_biased_set(link, aB)
        return (l2 / aB) * l1 * (s12 - s12t) / (
            (l2 * rt + l1 * s12t) * (l2 * rt + l1 * s12))
    if link is LinkType.SPLIT_MACRO:
        return (l1 + l2 * s21t) / (l1 * rt + l2 * s21t)
    if link is LinkType.SPLIT_DATA2:
        return (l2 + l1 * s12) / (l2 * rt + l1 * s12)
    if link is LinkType.SPLIT_CTRL2:
        return (l2 + l1 * s12) * s21 / (rt * (l1 * rt + l2 * s21))
    if link is LinkType.SPLIT_CTRL_B:
        aB = l2 / (l2 + l1 * s12t) - l2 / (l2 + l1 * s12)
        _check_biased_set(link, aB)
        return (l1 / aB) * l2 * (s21t - s21) / (
            (l1 * rt + l2 * s21) * (l1 * rt + l2 * s21t))
    raise ValueError(f"unknown link type: {link!r}")


def _coverage_integral(link: LinkType, theta: float, net: NetworkConfig,
                       spec: QuadratureSpec,
                       probs: AssociationProbabilities | None = None) -> float:
    """General-exponent path.

    In units t = pi * lambda_serving * r^2 every conditional coverage becomes
    an integral of exp(-b t - k t^q): b collects the serving-tier terms
    (distance density plus own-tier interference), k the other tier's void
    and, where the band is shared, its interference enhancement, and
    q = alpha_serving / alpha_other.
    """
    if probs is None:
        probs = association_probabilities(net, method="integral", spec=spec)
    ratios = derived_ratios(net)
    l1, l2 = net.lambda1, net.lambda2
    a1, a2 = net.alpha1, net.alpha2
    q12 = a1 / a2  # cross-term exponent when the macro tier serves
    q21 = a2 / a1  # and when the small tier serves
    base1 = math.pi * l2 * (math.pi * l1) ** (-q12)
    base2 = math.pi * l1 * (math.pi * l2) ** (-q21)

    if link is LinkType.CONV_MACRO:
        b = 1.0 + theta * hyp_geom_factor(a1, theta, spec)
        tb = theta / net.bias
        k = base1 * ratios.p21_tilde ** (2.0 / a2) * (
            1.0 + tb * hyp_geom_factor(a2, tb, spec))
        val = integrate_interval(
            lambda t: math.exp(-b * t - k * t ** q12),
            0.0, decay_cutoff(b, k, q12), spec)
        return val / probs.a1

    if link is LinkType.CONV_SMALL:
        b = 1.0 + theta * hyp_geom_factor(a2, theta, spec)
        k = base2 * ratios.p12 ** (2.0 / a1) * (
            1.0 + theta * hyp_geom_factor(a1, theta, spec))
        val = integrate_interval(
            lambda t: math.exp(-b * t - k * t ** q21),
            0.0, decay_cutoff(b, k, q21), spec)
        return val / probs.a2

    if link in (LinkType.CONV_BIASED, LinkType.SPLIT_DATA_B):
        _check_biased_set(link, probs.aB)
        b = 1.0 + theta * hyp_geom_factor(a2, theta, spec)
        k_lo = base2 * ratios.p12_tilde ** (2.0 / a1)  # inner edge of the macro void band
        k_hi = base2 * ratios.p12 ** (2.0 / a1)        # outer edge
        val = integrate_interval(
            lambda t: math.exp(-b * t) * (
                math.exp(-k_lo * t ** q21) - math.exp(-k_hi * t ** q21)),
            0.0, decay_cutoff(b, k_lo, q21), spec)
        return val / probs.aB

    if link is LinkType.SPLIT_MACRO:
        b = 1.0 + theta * hyp_geom_factor(a1, theta, spec)
        k = base1 * ratios.p21_tilde ** (2.0 / a2)
        val = integrate_interval(
            lambda t: math.exp(-b * t - k * t ** q12),
            0.0, decay_cutoff(b, k, q12), spec)
        return val / probs.a1

    if link is LinkType.SPLIT_DATA2:
        b = 1.0 + theta * hyp_geom_factor(a2, theta, spec)
        k = base2 * ratios.p12 ** (2.0 / a1)
        val = integrate_interval(
            lambda t: math.exp(-b * t - k * t ** q21),
            0.0, decay_cutoff(b, k, q21), spec)
        return val / probs.a2

    if link is LinkType.SPLIT_CTRL2:
        b = 1.0 + theta * hyp_geom_factor(a1, theta, spec)
        k = base1 * ratios.p21 ** (2.0 / a2)
        val = integrate_interval(
            lambda t: -math.exp(-b * t) * math.expm1(-k * t ** q12),
            0.0, decay_cutoff(b, 0.0, q12), spec)
        return val / probs.a2

    if link is LinkType.SPLIT_CTRL_B:
        _check_biased_set(link, probs.aB)
        b = 1.0 + theta * hyp_geom_factor(a1, theta, spec)
        k_lo = base1 * ratios.p21 ** (2.0 / a2)
        k_hi = base1 * ratios.p21_tilde ** (2.0 / a2)
        val = integrate_interval(
            lambda t: math.exp(-b * t) * (
                math.exp(-k_lo * t ** q12) - math.exp(-k_hi * t ** q12)),
            0.0, decay_cutoff(b, k_lo, q12), spec)
        return val / probs.aB

    raise ValueError(f"unknown link type: {link!r}")


def _resolve_method(method: str, net: NetworkConfig) -> str:
    if method == "closed":
        _require_closed_form(net)
        return "closed"
    if method == "integral":
        return "integral"
    if method == "auto":
        if net.alpha1 == 4.0 and net.alpha2 == 4.0:
            return "closed"
        return "integral"
    raise ValueError(f"unknown method: {method!r}")


def coverage(link: LinkType, theta: float, net: NetworkConfig,
             method: str = "auto",
             spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """P(SIR > theta) on the given link; theta is linear, not dB."""
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    if _resolve_method(method, net) == "closed":
        return _coverage_closed(link, theta, net)
    return _coverage_integral(link, theta, net, spec)


def coverage_curve(link: LinkType, theta_db, net: NetworkConfig,
                   method: str = "auto",
                   spec: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    """Coverage evaluated over a strictly increasing grid of dB thresholds."""
    grid = np.asarray(theta_db, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("theta_db must be a nonempty one-dimensional grid")
    if not np.all(np.diff(grid) > 0):
        raise ValueError("theta_db must be strictly increasing")
    thetas = 10.0 ** (grid / 10.0)
    resolved = _resolve_method(method, net)
    if resolved == "closed":
        return np.array([_coverage_closed(link, t, net) for t in thetas])
    probs = association_probabilities(net, method="integral", spec=spec)
    return np.array(
        [_coverage_integral(link, t, net, spec, probs=probs) for t in thetas])


def spectral_efficiency(link: LinkType, net: NetworkConfig,
                        method: str = "auto",
                        spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Mean ln(1 + SIR) of the link in nats/s/Hz.

    Computed as the semi-infinite integral of coverage(t) / (1 + t). The
    general-exponent path nests quadratures, so the outer integral runs at a
    slightly relaxed tolerance while the inner coverage evaluations run
    tighter than requested to keep the outer error estimate honest.
    """
    resolved = _resolve_method(method, net)
    if resolved == "closed":
        return integrate_semi_infinite(
            lambda t: _coverage_closed(link, t, net) / (1.0 + t), spec)

    inner = QuadratureSpec(
        rel_tol=min(1e-10, spec.rel_tol),
        abs_tol=min(1e-13, spec.abs_tol),
        max_subdivisions=spec.max_subdivisions,
    )
    outer = QuadratureSpec(
        rel_tol=max(1e-8, spec.rel_tol),
        abs_tol=max(1e-11, spec.abs_tol),
        max_subdivisions=spec.max_subdivisions,
    )
    probs = association_probabilities(net, method="integral", spec=inner)
    return integrate_semi_infinite(
        lambda t: _coverage_integral(link, t, net, inner, probs=probs) / (1.0 + t),
        outer,
    )
