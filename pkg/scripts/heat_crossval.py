"""Compare the subordination and direct Fourier solutions of the root-order heat equation."""

import argparse
import itertools
import time

from diracfrac.levy import HeatProblem, compare_heat_solvers
from diracfrac.spectral import gaussian


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--k", type=float, nargs="+", default=[0.0, 1.0])
    ap.add_argument("--t", type=float, nargs="+", default=[0.1, 0.3, 0.5, 1.0])
    ap.add_argument("--grid", type=int, default=256)
    args = ap.parse_args()

    f = gaussian(args.grid)
    print(f"{'n':>3} {'k':>5} {'t':>5} {'rel L2':>10} {'sec':>6}")
    for n, k, t in itertools.product(args.orders, args.k, args.t):
        start = time.perf_counter()
        err = compare_heat_solvers(HeatProblem(n, k, f, t))
        print(f"{n:>3} {k:>5.2f} {t:>5.2f} {err:>10.2e} {time.perf_counter() - start:>6.2f}")


if __name__ == "__main__":
    main()
