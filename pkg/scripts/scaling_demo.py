"""Critical and contrast norm ratios under the scaling of the data space."""

import argparse

from sqgvar import make_grid
from sqgvar.fields import gaussian_bump
from sqgvar.regularity import scaling_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--width", type=float, default=0.2)
    args = ap.parse_args()
    f = gaussian_bump(make_grid(args.grid), args.width)
    print(f"{'alpha':>5} {'lam':>4} {'crit p':>7} {'ratio':>10} {'L^2 ratio':>10} {'expected':>10}")
    for alpha in (1.2, 1.5, 1.8, 2.0):
        for lam in (1, 2, 4):
            r = scaling_check(f, lam, alpha)
            print(f"{alpha:5g} {lam:4d} {r.critical_exponent:7.3f} {r.critical_ratio:10.6f} "
                  f"{r.contrast_ratio:10.6f} {r.contrast_expected:10.6f}")


if __name__ == "__main__":
    main()
