#!/usr/bin/env python
"""Capacity and dark-count upper bounds versus fiber length.

Writes a CSV (same schema as ``epfiber sweep``) and prints a short table.
"""
import argparse

from epfiber.fiber_model import FiberParams
from epfiber.sweep import SweepConfig, evaluate_point, rows_to_csv, run_sweep, solve_threshold


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="rate_vs_distance.csv")
    ap.add_argument("--d-max", type=float, default=500.0)
    ap.add_argument("--points", type=int, default=250)
    args = ap.parse_args()

    fiber = FiberParams()
    p_dcs = (0.0, 1e-3, 1e-2)
    cfg = SweepConfig(fiber=fiber, p_dc=p_dcs, d_min=1.0, d_max=args.d_max,
                      n_points=args.points, clock_hz=1e9)
    rows = run_sweep(cfg)
    with open(args.out, "w", newline="") as fh:
        fh.write(rows_to_csv(rows))

    print(f"{'d [km]':>8} " + " ".join(f"{'p_dc=' + format(p, 'g'):>14}" for p in p_dcs))
    for d in (1, 50, 100, 150, 200, 300, 500):
        vals = [f"{evaluate_point(fiber, d, p).upper:14.4e}" for p in p_dcs]
        print(f"{d:8g} " + " ".join(vals))
    for p in p_dcs:
        print(f"upper bound vanishes beyond {solve_threshold(fiber, p):.4g} km for p_dc = {p:g}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
