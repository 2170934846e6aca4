"""Handover rates per unit trajectory length and the resulting time costs.

The biased association rule partitions the plane into a weighted Voronoi
tessellation with tier weights w1 = 1 and w2 = (bias * p2 / p1)^(1/alpha).
A user moving along a straight line crosses cell boundaries at a mean rate
proportional to the boundary length intensity, which splits into tier-pair
components HO_ij. Anchor (nearest-macro) boundaries are crossed at the
unweighted single-tier rate, independent of the small-cell density.

Costs convert rates into the dimensionless fraction of time spent in
handover: delay (s/handover) * velocity (m/s) * rate (handovers/m). A cost
may exceed one; clamping is the throughput model's job, not this module's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import MobilityConfig, NetworkConfig, Scenario, derived_ratios, with_mobility, with_network
from .specialfns import DEFAULT_QUADRATURE, QuadratureSpec, geometry_factor


@dataclass(frozen=True)
class HandoverRates:
    """Mean handover rates per meter of trajectory.

    ``conv[i, j]`` is the rate of serving-BS changes from tier i+1 to tier
    j+1. ``inter_anchor`` counts nearest-macro changes; ``intra_anchor`` is
    the remainder of the total serving-change rate after anchor changes,
    clamped at zero (``clamped`` flags a genuinely negative remainder).
    """

    conv: np.ndarray        # 2x2, handovers/m
    inter_anchor: float     # handovers/m
    intra_anchor: float     # handovers/m, clamped at 0
    clamped: bool = False

    @property
    def total(self) -> float:
        """Total serving-change rate across all tier pairs."""
        return float(self.conv.sum())


@dataclass(frozen=True)
class HandoverCost:
    value: float  # dimensionless fraction of time spent in handover
    architecture: str


def handover_rates(net: NetworkConfig,
                   spec: QuadratureSpec = DEFAULT_QUADRATURE) -> HandoverRates:
    """Boundary-crossing rates of the weighted two-tier tessellation.

    The tessellation weight ratio is defined through a single path-loss
    exponent, so the operation requires alpha1 == alpha2. An empty tier is
    allowed (its rates vanish); validity of everything else is the caller's
    concern.
    """
    if net.alpha1 != net.alpha2:
        raise ValueError("handover rates require alpha1 == alpha2")
    alpha = net.alpha1
    ratios = derived_ratios(net)
    lam = (net.lambda1, net.lambda2)
    w = (1.0, ratios.p21_tilde ** (1.0 / alpha))
    nu = lam[0] * w[0] ** 2 + lam[1] * w[1] ** 2

    conv = np.zeros((2, 2))
    if nu > 0.0:
        scale = math.pi * nu ** 1.5
        for i in range(2):
            for j in range(2):
                if lam[i] == 0.0 or lam[j] == 0.0:
                    continue
                conv[i, j] = (lam[i] * lam[j] * w[j] ** 3
                              * geometry_factor(w[j] / w[i], spec) / scale)

    inter = 4.0 * math.sqrt(lam[0]) / math.pi
    raw = float(conv.sum()) - inter
    intra = max(0.0, raw)
    clamped = raw < -1e-12 * max(inter, 1e-300)
    return HandoverRates(conv=conv, inter_anchor=inter, intra_anchor=intra,
                         clamped=clamped)


def conventional_cost(scn: Scenario, rates: HandoverRates | None = None,
                      spec: QuadratureSpec = DEFAULT_QUADRATURE) -> HandoverCost:
    """Fraction of time a conventional-architecture user spends in handover.

    Every serving-BS change costs the full core-network delay, or the
    reduced direct-interface delay with probability prob_x2_conv.
    """
    mob = scn.mobility
    if rates is None:
        rates = handover_rates(scn.network, spec)
    x = mob.prob_x2_conv
    delay = (1.0 - x) * mob.d_conv + x * mob.d_conv_x2
    return HandoverCost(value=delay * mob.velocity * rates.total,
                        architecture="conventional")


def split_cost(scn: Scenario, rates: HandoverRates | None = None,
               spec: QuadratureSpec = DEFAULT_QUADRATURE) -> HandoverCost:
    """Fraction of time a split-architecture user spends in handover.

    Anchor changes pay the inter-anchor delay (reduced with probability
    prob_x2_split); serving changes under an unchanged anchor stay out of
    the core network and pay only the intra-anchor delay.
    """
    mob = scn.mobility
    if rates is None:
        rates = handover_rates(scn.network, spec)
    z = mob.prob_x2_split
    anchor_delay = (1.0 - z) * mob.d_inter_anchor + z * mob.d_inter_anchor_x2
    per_length = rates.inter_anchor * anchor_delay + rates.intra_anchor * mob.d_intra_anchor
    return HandoverCost(value=mob.velocity * per_length, architecture="split")


def asymptotic_gain(mob: MobilityConfig) -> float:
    """Limit of the relative cost reduction of the split architecture as the
    small-cell density grows without bound, assuming no direct interfaces
    (prob_x2_conv = prob_x2_split = 0): 1 - d_intra_anchor / d_conv."""
    if mob.d_conv <= 0:
        raise ValueError("d_conv must be positive for the gain bound")
    return 1.0 - mob.d_intra_anchor / mob.d_conv


def numeric_gain(scn: Scenario, density_factor: float = 1e4,
                 spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Numeric counterpart of the asymptotic gain bound.

    Evaluates (conventional - split) / conventional cost at a small-cell
    density of ``density_factor`` times the macro density, with direct
    interfaces disabled. The ratio does not depend on velocity, which is
    forced to a positive value internally.
    """
    if density_factor <= 0:
        raise ValueError("density_factor must be positive")
    dense = with_network(scn, lambda2=density_factor * scn.network.lambda1)
    velocity = dense.mobility.velocity if dense.mobility.velocity > 0 else 1.0
    dense = with_mobility(dense, prob_x2_conv=0.0, prob_x2_split=0.0,
                          velocity=velocity)
    rates = handover_rates(dense.network, spec)
    dc = conventional_cost(dense, rates).value
    ds = split_cost(dense, rates).value
    return (dc - ds) / dc
