"""Analysis toolkit for two-tier downlink cellular networks.

Computes tier association probabilities, coverage distributions, spectral
efficiencies, handover rates and costs, and mobility-aware per-user
throughput for a conventional architecture and for an architecture that
splits the control plane (anchored at macro cells) from the user data
plane, and cross-checks the analytical results against an embedded
Monte Carlo simulator.
"""

__version__ = "0.1.0"

from .association import (
    AssociationProbabilities,
    AssociationSet,
    DistanceKind,
    DistancePdf,
    LoadEstimates,
    association_probabilities,
    classify,
    distance_pdf,
    loads,
)
from .config import (
    ConfigError,
    DerivedRatios,
    MobilityConfig,
    NetworkConfig,
    Scenario,
    SplitConfig,
    ValidationResult,
    config_hash,
    derived_ratios,
    load_scenario,
    require_valid,
    validate,
    with_mobility,
    with_network,
    with_split,
)
from .coverage import (
    LinkType,
    coverage,
    coverage_curve,
    spectral_efficiency,
)
from .mobility import (
    HandoverCost,
    HandoverRates,
    asymptotic_gain,
    conventional_cost,
    handover_rates,
    numeric_gain,
    split_cost,
)
from .montecarlo import (
    CoverageValidation,
    EmpiricalCcdf,
    EventClass,
    HandoverValidation,
    SimulationSpec,
    TrajectoryTrace,
    empirical_coverage,
    realize_network,
    run_coverage_validation,
    run_handover_validation,
    walk_trajectory,
)
from .specialfns import (
    QuadratureError,
    QuadratureSpec,
    geometry_factor,
    hyp_geom_factor,
    rho,
)
from .throughput import (
    Architecture,
    FeasibilityReport,
    TierThroughputs,
    UserThroughput,
    average_user_throughput,
    breaking_density,
    conventional_tier_throughputs,
    feasibility,
    split_tier_throughputs,
)

__all__ = [
    "__version__",
    "AssociationProbabilities",
    "AssociationSet",
    "DistanceKind",
    "DistancePdf",
    "LoadEstimates",
    "association_probabilities",
    "classify",
    "distance_pdf",
    "loads",
    "ConfigError",
    "DerivedRatios",
    "MobilityConfig",
    "NetworkConfig",
    "Scenario",
    "SplitConfig",
    "ValidationResult",
    "config_hash",
    "derived_ratios",
    "load_scenario",
    "require_valid",
    "validate",
    "with_mobility",
    "with_network",
    "with_split",
    "LinkType",
    "coverage",
    "coverage_curve",
    "spectral_efficiency",
    "HandoverCost",
    "HandoverRates",
    "asymptotic_gain",
    "conventional_cost",
    "handover_rates",
    "numeric_gain",
    "split_cost",
    "CoverageValidation",
    "EmpiricalCcdf",
    "EventClass",
    "HandoverValidation",
    "SimulationSpec",
    "TrajectoryTrace",
    "empirical_coverage",
    "realize_network",
    "run_coverage_validation",
    "run_handover_validation",
    "walk_trajectory",
    "QuadratureError",
    "QuadratureSpec",
    "geometry_factor",
    "hyp_geom_factor",
    "rho",
    "Architecture",
    "FeasibilityReport",
    "TierThroughputs",
    "UserThroughput",
    "average_user_throughput",
    "breaking_density",
    "conventional_tier_throughputs",
    "feasibility",
    "split_tier_throughputs",
]
