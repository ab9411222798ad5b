"""Tabulate one-sided stable densities and report their mass and Laplace identity errors."""

import argparse
from fractions import Fraction

import numpy as np

from diracfrac.levy import StableDensitySpec, levy_identity_check, stable_density, stable_mass


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nu", type=Fraction, nargs="+", default=[Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)])
    args = ap.parse_args()

    xs = np.geomspace(1e-2, 1e2, 9)
    print("xi      " + " ".join(f"{x:>10.3g}" for x in xs))
    for nu in args.nu:
        spec = StableDensitySpec.default(nu)
        print(f"g_{str(nu):<5} " + " ".join(f"{stable_density(spec, x):>10.3e}" for x in xs))
    for nu in args.nu:
        err = levy_identity_check(nu, 1.0, np.geomspace(0.1, 10, 25))
        print(f"nu={nu}: mass-1 = {stable_mass(nu) - 1:+.2e}, identity error = {err:.2e}")


if __name__ == "__main__":
    main()
