#!/usr/bin/env python3
"""Average per-user throughput versus speed for both architectures.

Sweeps user velocity at a fixed network and writes the conventional and
split average throughputs together with their handover cost fractions.
Useful for locating the speed beyond which the conventional architecture
saturates (cost fraction reaches one and throughput drops to zero).
"""

import argparse
import pathlib

import numpy as np

from hetsplit import (
    Architecture,
    Scenario,
    config_hash,
    load_scenario,
    with_mobility,
)
from hetsplit import average_user_throughput, conventional_cost, split_cost
from hetsplit.config import KMH_TO_MS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="INI scenario file (defaults used if omitted)")
    ap.add_argument("--min-kmh", type=float, default=0.0)
    ap.add_argument("--max-kmh", type=float, default=400.0)
    ap.add_argument("--points", type=int, default=41)
    ap.add_argument("--out", default="throughput_velocity.csv")
    args = ap.parse_args()

    base = load_scenario(args.config) if args.config else Scenario()
    grid = np.linspace(args.min_kmh, args.max_kmh, args.points)

    out = pathlib.Path(args.out)
    with out.open("w") as fh:
        fh.write(f"# config-hash: {config_hash(base)}\n")
        fh.write("velocity_kmh,at_conv_nats_per_s,at_split_nats_per_s,"
                 "cost_conv,cost_split,conv_saturated\n")
        for kmh in grid:
            scn = with_mobility(base, velocity=float(kmh) * KMH_TO_MS)
            conv = average_user_throughput(scn, Architecture.CONVENTIONAL)
            split = average_user_throughput(scn, Architecture.SPLIT)
            fh.write(f"{kmh:.10g},{conv.value:.10g},{split.value:.10g},"
                     f"{conventional_cost(scn).value:.10g},"
                     f"{split_cost(scn).value:.10g},"
                     f"{str(conv.saturated).lower()}\n")

    print(f"wrote {out} ({len(grid)} velocities)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
