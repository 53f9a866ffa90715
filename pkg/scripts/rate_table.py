#!/usr/bin/env python3
"""Print fitted long-time decay slopes of the linear flow against theory.

Sweeps dimensions and derivative orders for Gaussian displacement data using
the continuum radial-quadrature norms (no box, no time stepping), fitting
log-norm vs log(1+t) over a late-time window.

Usage: python3 scripts/rate_table.py [--t-lo 1e2] [--t-hi 1e4] [--points 40]
"""
from __future__ import annotations

import argparse

import numpy as np

from bousslab import (ModelParams, fit_rate, gaussian_radial_data,
                      radial_decay_series)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-lo", type=float, default=1e2)
    ap.add_argument("--t-hi", type=float, default=1e4)
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--alpha", type=float, default=-1.0)
    args = ap.parse_args()

    params = ModelParams(alpha=args.alpha)
    times = np.geomspace(args.t_lo, args.t_hi, args.points)
    print(f"{'n':>2} {'k':>2} {'fitted':>9} {'theory':>8} {'stderr':>9}")
    for n in (1, 2, 3):
        data = gaussian_radial_data(n=n)
        series = radial_decay_series(data, times, (0, 1, 2), n, params,
                                     which="linear")
        for s in series:
            fit = fit_rate(s, (args.t_lo, args.t_hi))
            theory = -n / 4.0 - s.k / 2.0
            print(f"{n:>2} {s.k:>2} {fit.slope:>9.4f} {theory:>8.2f} "
                  f"{fit.stderr:>9.1e}")


if __name__ == "__main__":
    main()
