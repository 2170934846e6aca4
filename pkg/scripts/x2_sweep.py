#!/usr/bin/env python3
"""Throughput comparison as X2 availability rises symmetrically.

Sets the X2 probability of both architectures to the same value and sweeps
it over [0, 1] at one or more speeds, recording the average throughput of
each architecture and their difference. If the difference changes sign the
crossing point is interpolated and reported as a comment line.
"""

import argparse
import pathlib

import numpy as np

from hetsplit import (
    Architecture,
    Scenario,
    average_user_throughput,
    config_hash,
    load_scenario,
    with_mobility,
)
from hetsplit.config import KMH_TO_MS


def sweep(base: Scenario, velocity_kmh: float, grid):
    rows = []
    scn_v = with_mobility(base, velocity=velocity_kmh * KMH_TO_MS)
    for x in grid:
        scn = with_mobility(scn_v, prob_x2_conv=float(x), prob_x2_split=float(x))
        conv = average_user_throughput(scn, Architecture.CONVENTIONAL).value
        split = average_user_throughput(scn, Architecture.SPLIT).value
        rows.append((float(x), conv, split, conv - split))
    return rows


def crossing(rows):
    for (x0, _, _, d0), (x1, _, _, d1) in zip(rows, rows[1:]):
        if d0 == 0.0:
            return x0
        if (d0 < 0.0) != (d1 < 0.0):
            return x0 - d0 * (x1 - x0) / (d1 - d0)
    return None


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="INI scenario file (defaults used if omitted)")
    ap.add_argument("--velocities-kmh", default="50,108",
                    help="comma-separated speeds to sweep at")
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--out", default="x2_sweep.csv")
    args = ap.parse_args()

    base = load_scenario(args.config) if args.config else Scenario()
    speeds = [float(tok) for tok in args.velocities_kmh.split(",") if tok]
    grid = np.linspace(0.0, 1.0, args.points)

    out = pathlib.Path(args.out)
    with out.open("w") as fh:
        fh.write(f"# config-hash: {config_hash(base)}\n")
        for kmh in speeds:
            rows = sweep(base, kmh, grid)
            at = crossing(rows)
            fh.write(f"# crossing_at_{kmh:g}_kmh: "
                     + (f"{at:.10g}" if at is not None else "none") + "\n")
        fh.write("velocity_kmh,x2_prob,at_conv_nats_per_s,"
                 "at_split_nats_per_s,conv_minus_split\n")
        for kmh in speeds:
            for x, conv, split, diff in sweep(base, kmh, grid):
                fh.write(f"{kmh:.10g},{x:.10g},{conv:.10g},"
                         f"{split:.10g},{diff:.10g}\n")

    print(f"wrote {out} ({len(speeds)} speeds x {len(grid)} X2 levels)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
