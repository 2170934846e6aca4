"""Batch command-line front end.

Subcommands
-----------
analyze      evaluate the analytical model at one configuration
validate     Monte Carlo cross-check against the analytical results
sweep        evaluate metrics along a one-parameter grid
feasibility  breaking-density search for the control-plane feasibility test

Every output is a CSV file with a leading comment block (tool version,
config hash, units, and any run parameters needed to reproduce it); emitted
values are finite numbers or explicit markers ("undefined", "unbounded",
"saturated"), never NaN. Output is byte-identical across runs with the same
inputs and seed.

Exit codes: 0 success, 1 usage error, 2 configuration or model error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .association import association_probabilities, loads
from .config import (
    KMH_TO_MS,
    PER_KM2,
    ConfigError,
    Scenario,
    config_hash,
    load_scenario,
    require_valid,
    with_mobility,
    with_network,
    with_split,
)
from .coverage import LinkType, coverage_curve, spectral_efficiency
from .mobility import handover_rates
from .montecarlo import (
    DEFAULT_GRID_DB,
    DEFAULT_SEED,
    EventClass,
    SimulationSpec,
    run_coverage_validation,
)
from .specialfns import QuadratureError
from .throughput import (
    Architecture,
    average_user_throughput,
    breaking_density,
    conventional_tier_throughputs,
    feasibility,
    split_tier_throughputs,
)

LN2 = math.log(2.0)

SWEEP_PARAMS = ("lambda2", "velocity", "probX2", "gamma", "bias", "w1")
ANALYZE_OUTPUTS = ("coverage", "se", "throughput", "handover", "feasibility")

#: External unit of each sweep parameter, echoed in the grid column name.
_PARAM_UNIT = {"lambda2": "per_km2", "velocity": "kmh", "probX2": "",
               "gamma": "", "bias": "", "w1": "hz"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise _UsageError(message)


def _parse_grid(text: str) -> np.ndarray:
    """Grid syntax: "start:stop:num" (inclusive linspace) or "v1,v2,...". """
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
            if num < 1:
                raise ValueError
            return np.linspace(start, stop, num)
        return np.array([float(v) for v in text.split(",") if v.strip() != ""])
    except ValueError:
        raise _UsageError(f"cannot parse grid specification {text!r}; "
                          "expected start:stop:num or a comma-separated list")


def _parse_overrides(pairs) -> dict:
    overrides = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep or "." not in key:
            raise _UsageError(f"cannot parse override {item!r}; "
                              "expected section.key=value")
        overrides[key.strip()] = value.strip()
    return overrides


def _scenario(args) -> Scenario:
    scn = load_scenario(args.config, _parse_overrides(args.set))
    require_valid(scn)
    return scn


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    v = float(value)
    if math.isnan(v):
        return "undefined"
    if math.isinf(v):
        return "unbounded"
    return "%.10g" % v


def _meta_lines(scn: Scenario, units: str, extra=()) -> list:
    lines = [f"# tool: hetsplit {__version__}",
             f"# config-hash: {config_hash(scn)}",
             f"# units: {units}"]
    lines.extend(f"# {key}: {value}" for key, value in extra)
    return lines


def _write_csv(path, meta, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        for line in meta:
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _density_out(per_m2: float, units: str) -> float:
    return per_m2 / PER_KM2 if units == "paper" else per_m2


def _rate_out(per_m: float, units: str) -> float:
    return per_m * 1e3 if units == "paper" else per_m


def _rate_suffix(units: str) -> str:
    return "per_km" if units == "paper" else "per_m"


def _density_suffix(units: str) -> str:
    return "per_km2" if units == "paper" else "per_m2"


def _biased_defined(scn: Scenario) -> bool:
    return scn.network.bias > 1.0


def _se_row(scn: Scenario, scale: float):
    """Per-link spectral efficiency, "undefined" for empty biased set."""
    out = {}
    for link in LinkType:
        if link in (LinkType.CONV_BIASED, LinkType.SPLIT_DATA_B,
                    LinkType.SPLIT_CTRL_B) and not _biased_defined(scn):
            out[link] = "undefined"
        else:
            out[link] = spectral_efficiency(link, scn.network) * scale
    return out


def _coverage_columns(scn: Scenario, grid_db: np.ndarray):
    curves = {}
    for link in LinkType:
        if link in (LinkType.CONV_BIASED, LinkType.SPLIT_DATA_B,
                    LinkType.SPLIT_CTRL_B) and not _biased_defined(scn):
            curves[link] = None
        else:
            curves[link] = coverage_curve(link, grid_db, scn.network)
    return curves


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _analyze_coverage(scn, grid_db, units, outdir):
    curves = _coverage_columns(scn, grid_db)
    header = ["theta_db"] + [f"cov_{lt.value}" for lt in LinkType]
    rows = []
    for i, theta in enumerate(grid_db):
        row = [theta]
        for lt in LinkType:
            row.append("undefined" if curves[lt] is None else curves[lt][i])
        rows.append(row)
    meta = _meta_lines(scn, units, [("output", "coverage")])
    _write_csv(os.path.join(outdir, "coverage.csv"), meta, header, rows)


def _analyze_se(scn, units, bits, outdir):
    scale = 1.0 / LN2 if bits else 1.0
    unit_name = "bits" if bits else "nats"
    values = _se_row(scn, scale)
    meta = _meta_lines(scn, units, [("output", "se"),
                                    ("se-unit", f"{unit_name}/s/Hz")])
    rows = [[lt.value, values[lt]] for lt in LinkType]
    _write_csv(os.path.join(outdir, "se.csv"), meta,
               ["link", f"se_{unit_name}_per_s_per_hz"], rows)


def _throughput_record(scn: Scenario, bits: bool):
    scale = 1.0 / LN2 if bits else 1.0
    probs = association_probabilities(scn.network)
    lds = loads(scn.network)
    conv = conventional_tier_throughputs(scn)
    split = split_tier_throughputs(scn)
    at_c = average_user_throughput(scn, Architecture.CONVENTIONAL)
    at_s = average_user_throughput(scn, Architecture.SPLIT)
    macro_user = probs.a1 * split.t1 / lds.n1
    return {
        "a1": probs.a1, "a2": probs.a2, "aB": probs.aB,
        "n1": lds.n1, "n2": lds.n2, "nB": lds.nB,
        "t1_conv": conv.t1 * scale, "t2_conv": conv.t2 * scale,
        "tB_conv": conv.tB * scale,
        "t1_split": split.t1 * scale, "t2_split": split.t2 * scale,
        "tB_split": split.tB * scale,
        "split_macro_saturated": split.saturated,
        "cost_conv": at_c.handover_cost, "cost_split": at_s.handover_cost,
        "at_conv": at_c.value * scale, "at_split": at_s.value * scale,
        "at_conv_saturated": at_c.saturated, "at_split_saturated": at_s.saturated,
        "macro_user_split": macro_user * scale,
    }


def _analyze_throughput(scn, units, bits, outdir):
    record = _throughput_record(scn, bits)
    unit_name = "bits" if bits else "nats"
    meta = _meta_lines(scn, units, [("output", "throughput"),
                                    ("throughput-unit", f"{unit_name}/s")])
    header = list(record.keys())
    _write_csv(os.path.join(outdir, "throughput.csv"), meta, header,
               [[record[k] for k in header]])


def _analyze_handover(scn, units, outdir):
    grid = np.linspace(0.0, 200.0, 21)  # small-cell density, per km2
    rs = _rate_suffix(units)
    header = ["lambda2_per_km2"] + [f"{name}_{rs}" for name in
                                    ("ho11", "ho12", "ho21", "ho22",
                                     "ho_total", "inter_anchor", "intra_anchor")]
    rows = []
    for lam2 in grid:
        net = with_network(scn, lambda2=lam2 * PER_KM2).network
        rates = handover_rates(net)
        rows.append([lam2]
                    + [_rate_out(v, units) for v in
                       (rates.conv[0, 0], rates.conv[0, 1], rates.conv[1, 0],
                        rates.conv[1, 1], rates.total, rates.inter_anchor,
                        rates.intra_anchor)])
    meta = _meta_lines(scn, units, [("output", "handover")])
    _write_csv(os.path.join(outdir, "handover.csv"), meta, header, rows)


def _feasibility_rows(scn: Scenario, gammas, units):
    rows = []
    for gamma in gammas:
        scn_g = with_split(scn, gamma=float(gamma))
        require_valid(scn_g)
        star = breaking_density(scn_g)
        rep = feasibility(scn_g)
        rows.append([gamma,
                     "unbounded" if star is None else _density_out(star, units),
                     rep.lhs, rep.rhs, rep.margin, rep.feasible])
    return rows


def _analyze_feasibility(scn, units, outdir, gammas=(1.0, 3.0, 5.0)):
    header = ["gamma", f"lambda2_star_{_density_suffix(units)}",
              "lhs_at_config", "rhs_at_config", "margin_at_config",
              "feasible_at_config"]
    meta = _meta_lines(scn, units, [("output", "feasibility")])
    _write_csv(os.path.join(outdir, "feasibility.csv"), meta, header,
               _feasibility_rows(scn, gammas, units))


def cmd_analyze(args) -> int:
    scn = _scenario(args)
    outputs = [s.strip() for s in args.outputs.split(",") if s.strip()]
    unknown = [o for o in outputs if o not in ANALYZE_OUTPUTS]
    if unknown:
        raise _UsageError(f"unknown analyze outputs: {', '.join(unknown)}")
    os.makedirs(args.out, exist_ok=True)
    grid_db = _parse_grid(args.grid) if args.grid else DEFAULT_GRID_DB
    for output in outputs:
        if output == "coverage":
            _analyze_coverage(scn, grid_db, args.units, args.out)
        elif output == "se":
            _analyze_se(scn, args.units, args.bits, args.out)
        elif output == "throughput":
            _analyze_throughput(scn, args.units, args.bits, args.out)
        elif output == "handover":
            _analyze_handover(scn, args.units, args.out)
        elif output == "feasibility":
            _analyze_feasibility(scn, args.units, args.out)
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    scn = _scenario(args)
    os.makedirs(args.out, exist_ok=True)
    sim = SimulationSpec(
        realizations=args.realizations if args.realizations else 1000,
        rng_seed=args.seed if args.seed is not None else DEFAULT_SEED)
    grid = _parse_grid(args.grid) if args.grid else DEFAULT_GRID_DB
    report = run_coverage_validation(scn, sim, grid_db=grid)

    header = ["theta_db"]
    for lt in LinkType:
        header += [f"{lt.value}_analytic", f"{lt.value}_empirical"]
    rows = []
    for i, theta in enumerate(report.grid_db):
        row = [theta]
        for lt in LinkType:
            row += [report.analytic_curves[lt][i],
                    report.empirical_ccdfs[lt].fractions[i]]
        rows.append(row)
    extra = [("output", "validate"), ("seed", sim.rng_seed),
             ("realizations", sim.realizations)]
    extra += [(f"samples-{lt.value}", report.empirical_ccdfs[lt].sample_count)
              for lt in LinkType]
    _write_csv(os.path.join(args.out, "validate_coverage.csv"),
               _meta_lines(scn, args.units, extra), header, rows)

    payload = {
        "tool": "hetsplit",
        "version": __version__,
        "config_hash": config_hash(scn),
        "seed": sim.rng_seed,
        "realizations": sim.realizations,
        "realizations_used": report.realizations_used,
        "discarded": report.discarded,
        "grid_db": [float(v) for v in report.grid_db],
        "coverage": {
            lt.value: {
                "max_abs_deviation": float(report.deviations[lt]),
                "samples": report.empirical_ccdfs[lt].sample_count,
                "sufficient": report.empirical_ccdfs[lt].sufficient,
            } for lt in LinkType
        },
        "association": {
            "analytic": [float(v) for v in report.assoc_analytic],
            "empirical": [float(v) for v in report.assoc_empirical],
            "max_abs_deviation": float(report.assoc_deviation),
        },
        "events": {
            cls.value: {
                "count": report.event_counts[cls],
                "empirical_per_m": float(report.event_empirical[cls]),
                "analytic_per_m": (None if report.event_analytic[cls] is None
                                   else float(report.event_analytic[cls])),
                "deviation": (float(report.event_deviations[cls])
                              if cls in report.event_deviations else None),
            } for cls in EventClass
        },
        "tolerances": {
            "coverage_abs": report.coverage_tolerance,
            "association_abs": report.assoc_tolerance,
            "rate_rel": report.rate_tolerance,
        },
        "notes": list(report.notes),
        "passed": report.passed,
    }
    with open(os.path.join(args.out, "validate_report.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    for lt in LinkType:
        ccdf = report.empirical_ccdfs[lt]
        status = "ok" if report.deviations[lt] <= report.coverage_tolerance \
            else ("low-confidence" if lt in report.low_confidence_links else "FAIL")
        print(f"coverage {lt.value}: max deviation {report.deviations[lt]:.4f} "
              f"(tol {report.coverage_tolerance}, n={ccdf.sample_count}) {status}")
    print(f"association: max deviation {report.assoc_deviation:.4f} "
          f"(tol {report.assoc_tolerance})")
    for cls in EventClass:
        if cls in report.event_deviations:
            print(f"event {cls.value}: deviation "
                  f"{report.event_deviations[cls]:.3f} (tol {report.rate_tolerance})")
        else:
            print(f"event {cls.value}: count {report.event_counts[cls]} "
                  "(informational)")
    for note in report.notes:
        print(f"note: {note}")
    print("validation PASSED" if report.passed else "validation FAILED")
    return 0 if report.passed else 3


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _apply_param(scn: Scenario, param: str, value: float) -> Scenario:
    if param == "lambda2":
        return with_network(scn, lambda2=value * PER_KM2)
    if param == "velocity":
        return with_mobility(scn, velocity=value * KMH_TO_MS)
    if param == "probX2":
        return with_mobility(scn, prob_x2_conv=value, prob_x2_split=value)
    if param == "gamma":
        return with_split(scn, gamma=value)
    if param == "bias":
        return with_network(scn, bias=value)
    if param == "w1":
        return with_split(scn, w1=value)
    raise _UsageError(f"unknown sweep parameter {param!r}")


def cmd_sweep(args) -> int:
    scn = _scenario(args)
    if not args.grid:
        raise _UsageError("sweep requires --grid")
    grid = _parse_grid(args.grid)
    if grid.size == 0 or not np.all(np.diff(grid) > 0):
        raise _UsageError("sweep grid must be nonempty and strictly increasing")
    outputs = [s.strip() for s in args.outputs.split(",") if s.strip()]
    unknown = [o for o in outputs if o not in ANALYZE_OUTPUTS]
    if unknown:
        raise _UsageError(f"unknown sweep outputs: {', '.join(unknown)}")
    os.makedirs(args.out, exist_ok=True)
    scale = 1.0 / LN2 if args.bits else 1.0
    rs = _rate_suffix(args.units)

    unit = _PARAM_UNIT[args.param]
    header = [f"{args.param}_{unit}" if unit else args.param]
    for output in outputs:
        if output == "throughput":
            header += ["at_conv", "at_split", "cost_conv", "cost_split",
                       "at_conv_saturated", "at_split_saturated",
                       "split_macro_saturated", "macro_user_split",
                       "t1_conv", "t2_conv", "tB_conv",
                       "t1_split", "t2_split", "tB_split"]
        elif output == "se":
            header += [f"se_{lt.value}" for lt in LinkType]
        elif output == "coverage":
            header += [f"cov0db_{lt.value}" for lt in LinkType]
        elif output == "handover":
            header += [f"{name}_{rs}" for name in
                       ("ho11", "ho12", "ho21", "ho22", "ho_total",
                        "inter_anchor", "intra_anchor")]
        elif output == "feasibility":
            header += ["lhs", "rhs", "margin", "feasible"]

    rows = []
    at_diffs = []
    for value in grid:
        scn_v = _apply_param(scn, args.param, float(value))
        require_valid(scn_v)
        row = [value]
        for output in outputs:
            if output == "throughput":
                rec = _throughput_record(scn_v, args.bits)
                row += [rec[k] for k in
                        ("at_conv", "at_split", "cost_conv", "cost_split",
                         "at_conv_saturated", "at_split_saturated",
                         "split_macro_saturated", "macro_user_split",
                         "t1_conv", "t2_conv", "tB_conv",
                         "t1_split", "t2_split", "tB_split")]
                at_diffs.append(rec["at_split"] - rec["at_conv"])
            elif output == "se":
                values = _se_row(scn_v, scale)
                row += [values[lt] for lt in LinkType]
            elif output == "coverage":
                curves = _coverage_columns(scn_v, np.array([0.0]))
                row += ["undefined" if curves[lt] is None else curves[lt][0]
                        for lt in LinkType]
            elif output == "handover":
                rates = handover_rates(scn_v.network)
                row += [_rate_out(v, args.units) for v in
                        (rates.conv[0, 0], rates.conv[0, 1], rates.conv[1, 0],
                         rates.conv[1, 1], rates.total, rates.inter_anchor,
                         rates.intra_anchor)]
            elif output == "feasibility":
                rep = feasibility(scn_v)
                row += [rep.lhs, rep.rhs, rep.margin, rep.feasible]
        rows.append(row)

    extra = [("output", "sweep"), ("parameter", args.param)]
    if args.crossover and at_diffs:
        crossing = _first_crossing(grid, at_diffs)
        extra.append(("crossover_at_split_minus_at_conv",
                      "none" if crossing is None else "%.6g" % crossing))
    meta = _meta_lines(scn, args.units, extra)
    _write_csv(os.path.join(args.out, f"sweep_{args.param}.csv"),
               meta, header, rows)
    return 0


def _first_crossing(grid, diffs):
    """Linearly interpolated location of the first sign change."""
    for i in range(1, len(diffs)):
        d0, d1 = diffs[i - 1], diffs[i]
        if d0 == 0.0:
            return float(grid[i - 1])
        if (d0 < 0.0) != (d1 < 0.0):
            x0, x1 = float(grid[i - 1]), float(grid[i])
            return x0 + (x1 - x0) * (-d0) / (d1 - d0)
    return None


# ---------------------------------------------------------------------------
# feasibility
# ---------------------------------------------------------------------------

def cmd_feasibility(args) -> int:
    scn = _scenario(args)
    os.makedirs(args.out, exist_ok=True)
    if args.gammas:
        gammas = [float(v) for v in args.gammas.split(",") if v.strip()]
        if not gammas:
            raise _UsageError("cannot parse --gammas")
    else:
        gammas = [scn.split.gamma]
    header = ["gamma", f"lambda2_star_{_density_suffix(args.units)}",
              "lhs_at_config", "rhs_at_config", "margin_at_config",
              "feasible_at_config"]
    meta = _meta_lines(scn, args.units, [("output", "feasibility")])
    _write_csv(os.path.join(args.out, "feasibility.csv"), meta, header,
               _feasibility_rows(scn, gammas, args.units))
    return 0


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", default=None, metavar="PATH",
                        help="INI configuration file (defaults used if omitted)")
    common.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                        help="override a single configuration value")
    common.add_argument("--out", default=".", metavar="DIR",
                        help="output directory (default: current directory)")
    common.add_argument("--seed", type=int, default=None,
                        help="simulation seed (validate)")
    common.add_argument("--realizations", type=int, default=None,
                        help="Monte Carlo realization count (validate)")
    common.add_argument("--grid", default=None, metavar="SPEC",
                        help="grid as start:stop:num or comma list")
    common.add_argument("--units", choices=("si", "paper"), default="si",
                        help="output units: si (m, s, Hz) or paper "
                             "(km-based densities and rates)")
    common.add_argument("--bits", action="store_true",
                        help="report spectral efficiency and throughput in "
                             "bits instead of nats")

    parser = _Parser(prog="hetsplit",
                     description="Two-tier network analysis toolkit")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="evaluate the analytical model")
    p.add_argument("--outputs", default=",".join(ANALYZE_OUTPUTS),
                   help="comma list of: " + ", ".join(ANALYZE_OUTPUTS))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("validate", parents=[common],
                       help="Monte Carlo cross-check")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", parents=[common],
                       help="evaluate metrics along a parameter grid")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--outputs", default="throughput",
                   help="comma list of: " + ", ".join(ANALYZE_OUTPUTS))
    p.add_argument("--crossover", action="store_true",
                   help="annotate the first sign change of at_split - at_conv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("feasibility", parents=[common],
                       help="breaking-density search")
    p.add_argument("--gammas", default=None, metavar="LIST",
                   help="comma list of gamma values (default: config gamma)")
    p.set_defaults(func=cmd_feasibility)
    return parser


def _join_grid_values(argv) -> list:
    """Merge ``--grid -5:5:3`` into ``--grid=-5:5:3``.

    argparse would otherwise read a grid starting with a negative number
    as an unknown option, and dB grids are negative half the time.
    """
    merged = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--grid" and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and any(c.isdigit() for c in argv[i + 1]):
            merged.append("--grid=" + argv[i + 1])
            skip = True
        else:
            merged.append(tok)
    return merged


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_grid_values(list(argv)))
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, QuadratureError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
