#!/usr/bin/env python3
"""Sweep small-cell density and tabulate handover rates and time costs.

For each density the CSV records the four serving-change rates, the anchor
rates, and the conventional and split handover cost fractions at the
configured velocity. Rates are reported per kilometer of trajectory.
"""

import argparse
import pathlib

import numpy as np

from hetsplit import (
    Scenario,
    config_hash,
    conventional_cost,
    handover_rates,
    load_scenario,
    split_cost,
    with_network,
)
from hetsplit.config import PER_KM2


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="INI scenario file (defaults used if omitted)")
    ap.add_argument("--min-per-km2", type=float, default=1.0)
    ap.add_argument("--max-per-km2", type=float, default=200.0)
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--out", default="handover_rates.csv")
    args = ap.parse_args()

    base = load_scenario(args.config) if args.config else Scenario()
    grid = np.linspace(args.min_per_km2, args.max_per_km2, args.points)

    out = pathlib.Path(args.out)
    with out.open("w") as fh:
        fh.write(f"# config-hash: {config_hash(base)}\n")
        fh.write(f"# velocity_ms: {base.mobility.velocity:.10g}\n")
        fh.write("lambda2_per_km2,ho11_per_km,ho12_per_km,ho21_per_km,"
                 "ho22_per_km,total_per_km,inter_anchor_per_km,"
                 "intra_anchor_per_km,cost_conv,cost_split\n")
        for lam2 in grid:
            scn = with_network(base, lambda2=float(lam2) * PER_KM2)
            r = handover_rates(scn.network)
            cells = [
                lam2,
                r.conv[0, 0] * 1e3, r.conv[0, 1] * 1e3,
                r.conv[1, 0] * 1e3, r.conv[1, 1] * 1e3,
                r.total * 1e3, r.inter_anchor * 1e3, r.intra_anchor * 1e3,
                conventional_cost(scn, r).value, split_cost(scn, r).value,
            ]
            fh.write(",".join(f"{c:.10g}" for c in cells) + "\n")

    print(f"wrote {out} ({len(grid)} densities)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
