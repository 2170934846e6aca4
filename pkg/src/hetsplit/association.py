"""Cell association: the three-way region rule, its probabilities, per-cell
loads, and the conditional service-distance densities.

A user compares the strongest macro and the strongest (bias-inflated) small
cell. That partitions the plane into three region sets: macro-served,
small-served on raw power, and small-served only because of the bias. All
downstream coverage and throughput results condition on this partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .config import NetworkConfig, derived_ratios
from .specialfns import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    decay_cutoff,
    integrate_interval,
)

# Empirical load inflation constant of the mean cell-population model: the
# typical cell is larger than the average cell, so the typical user shares
# the BS with 1.28 * density-ratio others on average.
LOAD_FACTOR = 1.28


class AssociationSet(Enum):
    MACRO = "macro"    # served by the nearest macro BS
    SMALL = "small"    # served by a small BS on raw received power
    BIASED = "biased"  # pulled onto a small BS only by the bias


class DistanceKind(Enum):
    """Which conditional service distance a density describes."""

    MACRO = "macro"              # serving-macro distance for macro users
    SMALL = "small"              # serving-small distance for unbiased small-cell users
    BIASED = "biased"            # serving-small distance for biased users
    CTRL_SMALL = "ctrl_small"    # anchor (nearest macro) distance for unbiased small-cell users
    CTRL_BIASED = "ctrl_biased"  # anchor distance for biased users


@dataclass(frozen=True)
class AssociationProbabilities:
    a1: float  # macro-served fraction
    a2: float  # small-served (unbiased) fraction
    aB: float  # biased fraction

    def as_tuple(self):
        return (self.a1, self.a2, self.aB)


@dataclass(frozen=True)
class LoadEstimates:
    """Expected users sharing the serving BS, including the typical user."""

    n1: float
    n2: float
    nB: float


@dataclass(frozen=True)
class DistancePdf:
    kind: DistanceKind
    evaluate: Callable  # density (1/m) at distance r (m); accepts numpy arrays


def classify(r1: float, r2: float, net: NetworkConfig) -> AssociationSet:
    """Assign a user at distances (r1, r2) from its nearest macro/small BS.

    Ties on the biased comparison go to the macro tier; the boundary is a
    measure-zero event but the simulator needs a deterministic rule.
    """
    if r1 <= 0 or r2 <= 0:
        raise ValueError("distances must be positive")
    pr1 = net.p1 * r1 ** (-net.alpha1)
    pr2 = net.p2 * r2 ** (-net.alpha2)
    if pr1 >= net.bias * pr2:
        return AssociationSet.MACRO
    if pr2 > pr1:
        return AssociationSet.SMALL
    return AssociationSet.BIASED


def _closed_probabilities(net: NetworkConfig) -> AssociationProbabilities:
    # Equal exponents make every joint void probability Gaussian in r, so the
    # radial integrals collapse to density ratios.
    ratios = derived_ratios(net)
    c = 2.0 / net.alpha1
    s21t = ratios.p21_tilde ** c
    s12 = ratios.p12 ** c
    s12t = ratios.p12_tilde ** c
    l1, l2 = net.lambda1, net.lambda2
    a1 = l1 / (l1 + l2 * s21t)
    a2 = l2 / (l2 + l1 * s12)
    aB = l2 / (l2 + l1 * s12t) - a2
    return AssociationProbabilities(a1=a1, a2=a2, aB=aB)


def _integral_probabilities(net: NetworkConfig,
                            spec: QuadratureSpec) -> AssociationProbabilities:
    # In units t = pi * lambda_serving * r^2 each probability becomes
    # integral_0^inf exp(-t - k t^q) dt with q the exponent ratio and k the
    # scaled void coefficient of the other tier.
    ratios = derived_ratios(net)
    l1, l2 = net.lambda1, net.lambda2
    q12 = net.alpha1 / net.alpha2
    q21 = net.alpha2 / net.alpha1

    k1 = math.pi * l2 * ratios.p21_tilde ** (2.0 / net.alpha2) * (math.pi * l1) ** (-q12)
    k2 = math.pi * l1 * ratios.p12 ** (2.0 / net.alpha1) * (math.pi * l2) ** (-q21)
    k2t = math.pi * l1 * ratios.p12_tilde ** (2.0 / net.alpha1) * (math.pi * l2) ** (-q21)

    a1 = integrate_interval(
        lambda t: math.exp(-t - k1 * t ** q12), 0.0, decay_cutoff(1.0, k1, q12), spec)
    a2 = integrate_interval(
        lambda t: math.exp(-t - k2 * t ** q21), 0.0, decay_cutoff(1.0, k2, q21), spec)
    # the difference is supported wherever its wider (smaller-k) term is
    aB = integrate_interval(
        lambda t: math.exp(-t - k2t * t ** q21) - math.exp(-t - k2 * t ** q21),
        0.0, decay_cutoff(1.0, k2t, q21), spec)
    return AssociationProbabilities(a1=a1, a2=a2, aB=aB)


def association_probabilities(net: NetworkConfig, method: str = "auto",
                              spec: QuadratureSpec = DEFAULT_QUADRATURE
                              ) -> AssociationProbabilities:
    """Fractions of users in each association set.

    ``method`` selects the equal-exponent closed form ("closed"), the general
    quadrature path ("integral"), or dispatches on the exponents ("auto").
    The two paths agree to the quadrature tolerance whenever both apply.
    """
    if method == "closed" or (method == "auto" and net.alpha1 == net.alpha2):
        if net.alpha1 != net.alpha2:
            raise ValueError("closed-form association requires alpha1 == alpha2")
        return _closed_probabilities(net)
    if method in ("integral", "auto"):
        return _integral_probabilities(net, spec)
    raise ValueError(f"unknown method: {method!r}")


def loads(net: NetworkConfig, method: str = "auto",
          spec: QuadratureSpec = DEFAULT_QUADRATURE) -> LoadEstimates:
    """Mean users per serving BS in each set, from the same A_j values."""
    probs = association_probabilities(net, method=method, spec=spec)
    lu = net.lambda_u
    return LoadEstimates(
        n1=1.0 + LOAD_FACTOR * lu * probs.a1 / net.lambda1,
        n2=1.0 + LOAD_FACTOR * lu * probs.a2 / net.lambda2,
        nB=1.0 + LOAD_FACTOR * lu * probs.aB / net.lambda2,
    )


def distance_pdf(kind: DistanceKind, net: NetworkConfig,
                 spec: QuadratureSpec = DEFAULT_QUADRATURE) -> DistancePdf:
    """Conditional service-distance density for one link distance kind.

    Each density is the joint "nearest BS at r and the association event
    holds" density divided by the probability of the event, so it integrates
    to one by construction. The anchor distances (CTRL_*) describe the
    nearest macro BS seen by users whose data comes from a small cell.
    """
    ratios = derived_ratios(net)
    probs = association_probabilities(net, spec=spec)
    l1, l2 = net.lambda1, net.lambda2
    a1, a2 = net.alpha1, net.alpha2
    e12 = 2.0 * a1 / a2  # distance exponent of the cross-tier void, macro serving
    e21 = 2.0 * a2 / a1  # and small serving
    c21t = ratios.p21_tilde ** (2.0 / a2)
    c21 = ratios.p21 ** (2.0 / a2)
    c12 = ratios.p12 ** (2.0 / a1)
    c12t = ratios.p12_tilde ** (2.0 / a1)

    if kind is DistanceKind.MACRO:
        def evaluate(r):
            r = np.asarray(r, dtype=float)
            return (2.0 * math.pi * l1 / probs.a1) * r * np.exp(
                -math.pi * (l1 * r ** 2 + l2 * c21t * r ** e12))
    elif kind is DistanceKind.SMALL:
        def evaluate(r):
            r = np.asarray(r, dtype=float)
            return (2.0 * math.pi * l2 / probs.a2) * r * np.exp(
                -math.pi * (l2 * r ** 2 + l1 * c12 * r ** e21))
    elif kind is DistanceKind.BIASED:
        def evaluate(r):
            r = np.asarray(r, dtype=float)
            base = np.exp(-math.pi * l2 * r ** 2)
            band = (np.exp(-math.pi * l1 * c12t * r ** e21)
                    - np.exp(-math.pi * l1 * c12 * r ** e21))
            return (2.0 * math.pi * l2 / probs.aB) * r * base * band
    elif kind is DistanceKind.CTRL_SMALL:
        def evaluate(r):
            r = np.asarray(r, dtype=float)
            base = np.exp(-math.pi * l1 * r ** 2)
            inside = -np.expm1(-math.pi * l2 * c21 * r ** e12)
            return (2.0 * math.pi * l1 / probs.a2) * r * base * inside
    elif kind is DistanceKind.CTRL_BIASED:
        def evaluate(r):
            r = np.asarray(r, dtype=float)
            base = np.exp(-math.pi * l1 * r ** 2)
            band = (np.exp(-math.pi * l2 * c21 * r ** e12)
                    - np.exp(-math.pi * l2 * c21t * r ** e12))
            return (2.0 * math.pi * l1 / probs.aB) * r * base * band
    else:
        raise ValueError(f"unknown distance kind: {kind!r}")

    return DistancePdf(kind=kind, evaluate=evaluate)
