"""Per-tier throughputs, the control-plane feasibility test, and the
mobility-aware per-user throughput for both architectures.

In the conventional architecture every base station splits the whole band
W between normal subframes (macro and unbiased small users) and protected
subframes (biased users), after reserving a control fraction mu_c.

In the split architecture the macro tier keeps w1 for control plus macro
data, and the small tier gets w2 = w_total - w1 for data. Every small-cell
user's control signaling rides on its anchor macro, which consumes macro
capacity: the macro data rate carries a bracket term that shrinks as the
offloaded control demand grows and hits zero exactly where the feasibility
margin does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .association import association_probabilities, loads
from .config import Scenario, with_network
from .coverage import LinkType, spectral_efficiency
from .mobility import HandoverCost, conventional_cost, split_cost
from .specialfns import DEFAULT_QUADRATURE, QuadratureSpec


class Architecture(Enum):
    CONVENTIONAL = "conventional"
    SPLIT = "split"


@dataclass(frozen=True)
class TierThroughputs:
    """BS throughput delivered per association state, nats/s."""

    t1: float
    t2: float
    tB: float
    architecture: Architecture
    saturated: bool = False  # split only: control demand exceeded macro capacity


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    lhs: float    # offloaded control demand ratio
    rhs: float    # macro control supply ratio, inf when mu_c = 0
    margin: float  # rhs - lhs; feasible iff margin >= 0


@dataclass(frozen=True)
class UserThroughput:
    value: float          # nats/s
    handover_cost: float  # dimensionless, >= 0, may exceed 1
    saturated: bool       # handover cost reached 1; value forced to 0
    architecture: Architecture


def _se(link: LinkType, scn: Scenario, method: str, spec: QuadratureSpec) -> float:
    return spectral_efficiency(link, scn.network, method=method, spec=spec)


def conventional_tier_throughputs(scn: Scenario, method: str = "auto",
                                  spec: QuadratureSpec = DEFAULT_QUADRATURE
                                  ) -> TierThroughputs:
    """Shared-band throughputs: the control reservation scales everything,
    the protected-subframe fraction eta is all the biased users get."""
    sp = scn.split
    base = (1.0 - sp.mu_c) * sp.w_total
    t1 = base * (1.0 - sp.eta) * _se(LinkType.CONV_MACRO, scn, method, spec)
    t2 = base * (1.0 - sp.eta) * _se(LinkType.CONV_SMALL, scn, method, spec)
    if scn.network.bias > 1.0:
        tB = base * sp.eta * _se(LinkType.CONV_BIASED, scn, method, spec)
    else:
        tB = 0.0  # empty biased set
    return TierThroughputs(t1=t1, t2=t2, tB=tB,
                           architecture=Architecture.CONVENTIONAL)


def _control_demand(scn: Scenario, method: str,
                    spec: QuadratureSpec) -> tuple[float, float, float]:
    """Small-tier data rates t2, tB and the control demand ratio
    lhs = t2 / r_c2 + tB / r_cB, where r_cX is the rate the anchor macro
    could deliver on w1 over the matching control link."""
    sp = scn.split
    t2 = (1.0 - sp.eta) * sp.w2 * _se(LinkType.SPLIT_DATA2, scn, method, spec)
    r_c2 = sp.w1 * _se(LinkType.SPLIT_CTRL2, scn, method, spec)
    lhs = t2 / r_c2
    if scn.network.bias > 1.0:
        tB = sp.eta * sp.w2 * _se(LinkType.SPLIT_DATA_B, scn, method, spec)
        r_cB = sp.w1 * _se(LinkType.SPLIT_CTRL_B, scn, method, spec)
        lhs += tB / r_cB
    else:
        tB = 0.0
    return t2, tB, lhs


def feasibility(scn: Scenario, method: str = "auto",
                spec: QuadratureSpec = DEFAULT_QUADRATURE) -> FeasibilityReport:
    """Can the macro tier absorb the offloaded control signaling?

    The demand side (lhs) is the per-small-BS control load implied by the
    small-tier data rates after the gamma-fold control compression; the
    supply side (rhs) is what the macro tier can spare. With mu_c = 0 there
    is no control traffic at all and the architecture is always feasible.
    """
    net, sp = scn.network, scn.split
    _, _, lhs = _control_demand(scn, method, spec)
    if sp.mu_c == 0.0:
        rhs = math.inf
    else:
        rhs = net.lambda1 * sp.gamma / (net.lambda2 * sp.mu_c)
    margin = rhs - lhs
    return FeasibilityReport(feasible=margin >= 0.0, lhs=lhs, rhs=rhs,
                             margin=margin)


def split_tier_throughputs(scn: Scenario, method: str = "auto",
                           spec: QuadratureSpec = DEFAULT_QUADRATURE
                           ) -> TierThroughputs:
    """Split-band throughputs.

    t1 is the macro data rate left after the anchor duties: the bracket
    1 - (lambda2 * mu_c / (lambda1 * gamma)) * lhs reaches zero exactly at
    the feasibility boundary and is clamped there, flagged ``saturated``.
    """
    net, sp = scn.network, scn.split
    t2, tB, lhs = _control_demand(scn, method, spec)
    r_s1 = sp.w1 * _se(LinkType.SPLIT_MACRO, scn, method, spec)
    if sp.mu_c == 0.0:
        bracket = 1.0
    else:
        bracket = 1.0 - (net.lambda2 * sp.mu_c / (net.lambda1 * sp.gamma)) * lhs
    saturated = bracket < 0.0
    t1 = 0.0 if saturated else (1.0 - sp.mu_c) * r_s1 * bracket
    return TierThroughputs(t1=t1, t2=t2, tB=tB,
                           architecture=Architecture.SPLIT,
                           saturated=saturated)


def breaking_density(scn: Scenario, rel_tol: float = 0.01, max_iter: int = 60,
                     method: str = "auto",
                     spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float | None:
    """Small-cell density at which the feasibility margin crosses zero.

    Expands a bracket upward from the macro density by doubling, then
    bisects to ``rel_tol`` relative on the density. Returns None when no
    finite breaking point exists (for example mu_c = 0) or when the search
    did not bracket a crossing within ``max_iter`` doublings.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")

    def margin_at(lam2: float) -> float:
        return feasibility(with_network(scn, lambda2=lam2), method, spec).margin

    lo = scn.network.lambda1
    m_lo = margin_at(lo)
    for _ in range(max_iter):
        if m_lo >= 0.0:
            break
        lo /= 2.0
        m_lo = margin_at(lo)
    if m_lo < 0.0:
        return None
    if not math.isfinite(m_lo):
        return None  # unlimited control supply; never breaks

    hi = 2.0 * lo
    m_hi = margin_at(hi)
    steps = 0
    while m_hi >= 0.0:
        steps += 1
        if steps > max_iter:
            return None
        lo, m_lo = hi, m_hi
        hi *= 2.0
        m_hi = margin_at(hi)

    for _ in range(max_iter):
        if hi - lo <= rel_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if margin_at(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def average_user_throughput(scn: Scenario, architecture: Architecture,
                            method: str = "auto",
                            spec: QuadratureSpec = DEFAULT_QUADRATURE
                            ) -> UserThroughput:
    """Mobility-aware per-user throughput along a long trajectory.

    The stationary part weights each association state's per-user share
    A_j * T_j / N_j; the mobility part removes the fraction of time spent
    in handover and nullifies the rate once that fraction reaches one.
    """
    net = scn.network
    probs = association_probabilities(net, method=method, spec=spec)
    lds = loads(net, method=method, spec=spec)
    still = scn.mobility.velocity == 0.0
    if architecture is Architecture.CONVENTIONAL:
        tiers = conventional_tier_throughputs(scn, method, spec)
        cost = (HandoverCost(0.0, "conventional") if still
                else conventional_cost(scn, spec=spec))
    elif architecture is Architecture.SPLIT:
        tiers = split_tier_throughputs(scn, method, spec)
        cost = HandoverCost(0.0, "split") if still else split_cost(scn, spec=spec)
    else:
        raise ValueError(f"unknown architecture: {architecture!r}")

    stationary = probs.a1 * tiers.t1 / lds.n1 + probs.a2 * tiers.t2 / lds.n2
    if probs.aB > 0.0:
        stationary += probs.aB * tiers.tB / lds.nB
    penalty = 1.0 - min(1.0, cost.value)
    return UserThroughput(value=stationary * penalty,
                          handover_cost=cost.value,
                          saturated=cost.value >= 1.0,
                          architecture=architecture)
