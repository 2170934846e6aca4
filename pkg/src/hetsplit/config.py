"""Model parameter records, unit discipline, and validation.

Everything internal is SI: densities in BS/m^2 (users/m^2), powers in watts,
bandwidths in Hz, delays in seconds, velocities in m/s. The helper
constructors and the config-file loader accept the conventional field units
(BS/km^2, km/h) and convert exactly once at that boundary. Records are
frozen; every other module consumes immutable snapshots.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, fields, replace

PER_KM2 = 1e-6       # BS/km^2 -> BS/m^2
KMH_TO_MS = 1 / 3.6  # km/h -> m/s


class ConfigError(ValueError):
    """Raised for unreadable or structurally invalid configuration input."""


@dataclass(frozen=True)
class NetworkConfig:
    """Two-tier downlink geometry and radio parameters."""

    lambda1: float = 2.0e-6    # macro BS density (BS/m^2)
    lambda2: float = 50.0e-6   # small BS density (BS/m^2)
    lambda_u: float = 50.0e-6  # user density (users/m^2)
    p1: float = 50.0           # macro transmit power (W)
    p2: float = 5.0            # small-cell transmit power (W)
    alpha1: float = 4.0        # macro path-loss exponent (> 2)
    alpha2: float = 4.0        # small-cell path-loss exponent (> 2)
    bias: float = 30.0         # small-cell association bias, linear (>= 1)
    noise: float = 0.0         # noise power sigma^2 (W); only the simulator uses it

    @classmethod
    def from_per_km2(cls, lambda1: float = 2.0, lambda2: float = 50.0,
                     lambda_u: float = 50.0, **kw) -> "NetworkConfig":
        """Build from densities given in BS/km^2 (single boundary conversion)."""
        return cls(lambda1=lambda1 * PER_KM2, lambda2=lambda2 * PER_KM2,
                   lambda_u=lambda_u * PER_KM2, **kw)


@dataclass(frozen=True)
class SplitConfig:
    """Spectrum and control-plane budget shared by both architectures."""

    w_total: float = 10e6  # total spectrum W (Hz)
    w1: float = 2e6        # macro-tier share under the split (Hz)
    mu_c: float = 0.3      # control overhead fraction of capacity, in [0, 1)
    gamma: float = 1.0     # control reduction factor for offloaded users, >= 1
    eta: float = 0.3       # almost-blank-subframe time fraction, in [0, 1)

    @property
    def w2(self) -> float:
        """Small-cell share of the spectrum; always derived, never stored."""
        return self.w_total - self.w1


@dataclass(frozen=True)
class MobilityConfig:
    """User speed, the five handover delays, and X2 availability.

    By default the split inter-anchor delays equal the conventional delays
    (the signalling procedure is the same); only the intra-anchor delay is
    shorter because the core network is never involved.
    """

    velocity: float = 0.0            # user speed (m/s)
    d_conv: float = 0.7              # conventional handover delay, no X2 (s)
    d_conv_x2: float = 0.35          # conventional handover delay over X2 (s)
    d_inter_anchor: float = 0.7      # split inter-anchor delay, no X2 (s)
    d_inter_anchor_x2: float = 0.35  # split inter-anchor delay over X2 (s)
    d_intra_anchor: float = 0.35     # split intra-anchor delay (s)
    prob_x2_conv: float = 0.0        # X2 availability between any two BSs, in [0, 1]
    prob_x2_split: float = 0.0       # X2 availability between anchors, in [0, 1]

    @classmethod
    def from_kmh(cls, velocity: float = 0.0, **kw) -> "MobilityConfig":
        """Build from a speed given in km/h (single boundary conversion)."""
        return cls(velocity=velocity * KMH_TO_MS, **kw)


@dataclass(frozen=True)
class DerivedRatios:
    """The four power/bias ratios the analysis is written in terms of."""

    p12: float        # p1 / p2
    p21: float        # p2 / p1
    p12_tilde: float  # p1 / (bias * p2)
    p21_tilde: float  # bias * p2 / p1


def derived_ratios(net: NetworkConfig) -> DerivedRatios:
    """Pure function of the network record; equal configs give bitwise-equal ratios."""
    p12 = net.p1 / net.p2
    return DerivedRatios(
        p12=p12,
        p21=net.p2 / net.p1,
        p12_tilde=p12 / net.bias,
        p21_tilde=net.bias * net.p2 / net.p1,
    )


@dataclass(frozen=True)
class Scenario:
    """One complete what-if case: network geometry, spectrum split, mobility."""

    network: NetworkConfig = NetworkConfig()
    split: SplitConfig = SplitConfig()
    mobility: MobilityConfig = MobilityConfig()


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple = ()


def validate(scenario: Scenario) -> ValidationResult:
    """Check every record invariant; name each violation, never clamp silently."""
    net, split, mob = scenario.network, scenario.split, scenario.mobility
    bad = []

    for name in ("lambda1", "lambda2", "lambda_u"):
        if getattr(net, name) <= 0:
            bad.append(f"{name} must be positive")
    for name in ("p1", "p2"):
        if getattr(net, name) <= 0:
            bad.append(f"{name} must be positive")
    if net.alpha1 <= 2:
        bad.append("alpha1 must exceed 2")
    if net.alpha2 <= 2:
        bad.append("alpha2 must exceed 2")
    if net.bias < 1:
        bad.append("bias must be at least 1")
    if net.noise < 0:
        bad.append("noise must be nonnegative")

    if split.w_total <= 0:
        bad.append("w_total must be positive")
    if split.w1 <= 0:
        bad.append("w1 must be positive")
    elif split.w1 >= split.w_total:
        bad.append("w1 must be strictly less than w_total")
    if not 0 <= split.mu_c < 1:
        bad.append("mu_c must lie in [0, 1)")
    if split.gamma < 1:
        bad.append("gamma must be at least 1")
    if not 0 <= split.eta < 1:
        bad.append("eta must lie in [0, 1)")

    if mob.velocity < 0:
        bad.append("velocity must be nonnegative")
    for name in ("d_conv", "d_conv_x2", "d_inter_anchor",
                 "d_inter_anchor_x2", "d_intra_anchor"):
        if getattr(mob, name) < 0:
            bad.append(f"{name} must be nonnegative")
    for name in ("prob_x2_conv", "prob_x2_split"):
        if not 0 <= getattr(mob, name) <= 1:
            bad.append(f"{name} must lie in [0, 1]")

    return ValidationResult(ok=not bad, violations=tuple(bad))


def require_valid(scenario: Scenario) -> Scenario:
    """Validate and raise ConfigError listing every violated invariant."""
    result = validate(scenario)
    if not result.ok:
        raise ConfigError("invalid configuration: " + "; ".join(result.violations))
    return scenario


# Config files use conventional field units with explicit suffixes so that a
# value pasted from a plot caption (BS/km^2, km/h) reads back unambiguously.
_NETWORK_KEYS = {
    "lambda1_per_km2": ("lambda1", PER_KM2),
    "lambda2_per_km2": ("lambda2", PER_KM2),
    "lambda_u_per_km2": ("lambda_u", PER_KM2),
    "p1_watts": ("p1", 1.0),
    "p2_watts": ("p2", 1.0),
    "alpha1": ("alpha1", 1.0),
    "alpha2": ("alpha2", 1.0),
    "bias": ("bias", 1.0),
    "noise_watts": ("noise", 1.0),
}
_SPLIT_KEYS = {
    "w_total_hz": ("w_total", 1.0),
    "w1_hz": ("w1", 1.0),
    "mu_c": ("mu_c", 1.0),
    "gamma": ("gamma", 1.0),
    "eta": ("eta", 1.0),
}
_MOBILITY_KEYS = {
    "velocity_kmh": ("velocity", KMH_TO_MS),
    "d_conv_s": ("d_conv", 1.0),
    "d_conv_x2_s": ("d_conv_x2", 1.0),
    "d_inter_anchor_s": ("d_inter_anchor", 1.0),
    "d_inter_anchor_x2_s": ("d_inter_anchor_x2", 1.0),
    "d_intra_anchor_s": ("d_intra_anchor", 1.0),
    "prob_x2_conv": ("prob_x2_conv", 1.0),
    "prob_x2_split": ("prob_x2_split", 1.0),
}
_SECTIONS = {
    "network": (_NETWORK_KEYS, NetworkConfig),
    "split": (_SPLIT_KEYS, SplitConfig),
    "mobility": (_MOBILITY_KEYS, MobilityConfig),
}


def _read_section(parser, section: str, keymap: dict, cls):
    kwargs = {}
    if parser.has_section(section):
        for key, raw in parser.items(section):
            if key not in keymap:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            field_name, scale = keymap[key]
            try:
                kwargs[field_name] = float(raw) * scale
            except ValueError:
                raise ConfigError(
                    f"key '{key}' in section [{section}] is not a number: {raw!r}"
                ) from None
    return cls(**kwargs)


def load_scenario(path=None, overrides: dict | None = None) -> Scenario:
    """Load a scenario from an INI-style file; every key is optional.

    ``overrides`` maps ``"section.key"`` strings (same names and units as the
    file) to values, and wins over the file. With no path and no overrides
    the defaults are returned.
    """
    parser = configparser.ConfigParser()
    if path is not None:
        read = parser.read(path)
        if not read:
            raise ConfigError(f"cannot read config file: {path}")
        for section in parser.sections():
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]")
    if overrides:
        for dotted, value in overrides.items():
            try:
                section, key = dotted.split(".", 1)
            except ValueError:
                raise ConfigError(f"override key must look like section.key: {dotted!r}") from None
            if section not in _SECTIONS or key not in _SECTIONS[section][0]:
                raise ConfigError(f"unknown override: {dotted!r}")
            if not parser.has_section(section):
                parser.add_section(section)
            parser.set(section, key, str(value))

    records = {}
    for section, (keymap, cls) in _SECTIONS.items():
        records[section] = _read_section(parser, section, keymap, cls)
    return Scenario(network=records["network"], split=records["split"],
                    mobility=records["mobility"])


def config_hash(scenario: Scenario) -> str:
    """Short stable digest of every field value, for output provenance."""
    parts = []
    for record in (scenario.network, scenario.split, scenario.mobility):
        for f in fields(record):
            parts.append(f"{f.name}={getattr(record, f.name)!r}")
    return hashlib.sha256(";".join(parts).encode()).hexdigest()[:12]


def with_network(scenario: Scenario, **kw) -> Scenario:
    return replace(scenario, network=replace(scenario.network, **kw))


def with_split(scenario: Scenario, **kw) -> Scenario:
    return replace(scenario, split=replace(scenario.split, **kw))


def with_mobility(scenario: Scenario, **kw) -> Scenario:
    return replace(scenario, mobility=replace(scenario.mobility, **kw))
