"""Splitting error of the first-order disentangled propagator against the exact one."""

import argparse

import numpy as np

from diracfrac.evolution import bch_error_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--p", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--tmin", type=float, default=1e-4)
    ap.add_argument("--tmax", type=float, default=1e-2)
    args = ap.parse_args()

    ts = np.geomspace(args.tmin, args.tmax, 9)
    print(f"{'n':>3} {'p':>6} {'slope':>8}   residual at tmin .. tmax")
    for n in args.orders:
        for p in args.p:
            rows, slope = bch_error_scan(n, args.a, p, ts)
            print(f"{n:>3} {p:>6.2f} {slope:>8.4f}   {rows[0][1]:.3e} .. {rows[-1][1]:.3e}")


if __name__ == "__main__":
    main()
