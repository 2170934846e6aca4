#!/usr/bin/env python3
"""Map the control-plane feasibility margin over density and reduction factor.

For each control reduction factor gamma the script sweeps the small-cell
density, records the feasibility margin of the split architecture, and
bisects for the breaking density (the largest density whose margin is still
nonnegative). An infinite breaking density is reported as "unbounded".
"""

import argparse
import pathlib

import numpy as np

from hetsplit import (
    Scenario,
    breaking_density,
    config_hash,
    feasibility,
    load_scenario,
    with_network,
    with_split,
)
from hetsplit.config import PER_KM2


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="INI scenario file (defaults used if omitted)")
    ap.add_argument("--gammas", default="1,3,5",
                    help="comma-separated control reduction factors")
    ap.add_argument("--min-per-km2", type=float, default=0.05)
    ap.add_argument("--max-per-km2", type=float, default=50.0)
    ap.add_argument("--points", type=int, default=30)
    ap.add_argument("--out", default="feasibility_map.csv")
    args = ap.parse_args()

    base = load_scenario(args.config) if args.config else Scenario()
    gammas = [float(tok) for tok in args.gammas.split(",") if tok]
    # geometric spacing: the margin varies fastest at low density
    grid = np.geomspace(args.min_per_km2, args.max_per_km2, args.points)

    out = pathlib.Path(args.out)
    with out.open("w") as fh:
        fh.write(f"# config-hash: {config_hash(base)}\n")
        for g in gammas:
            star = breaking_density(with_split(base, gamma=g))
            text = "unbounded" if star is None else f"{star / PER_KM2:.10g}"
            fh.write(f"# breaking_density_per_km2_gamma_{g:g}: {text}\n")
        fh.write("gamma,lambda2_per_km2,margin,feasible\n")
        for g in gammas:
            scn_g = with_split(base, gamma=g)
            for lam2 in grid:
                rep = feasibility(with_network(scn_g, lambda2=float(lam2) * PER_KM2))
                fh.write(f"{g:.10g},{lam2:.10g},{rep.margin:.10g},"
                         f"{str(rep.feasible).lower()}\n")

    print(f"wrote {out} ({len(gammas)} gammas x {len(grid)} densities)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
