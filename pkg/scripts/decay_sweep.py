"""Fit log-log decay slopes of the fractional heat semigroup over the probe matrix."""

import argparse

import numpy as np

from sqgvar import make_grid
from sqgvar.runner import DECAY_ALPHAS, DECAY_CASES
from sqgvar.semigroup import DecayProbe, measure_decay_slope


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=256)
    args = ap.parse_args()
    grid = make_grid(args.grid)
    print(f"{'alpha':>5} {'p':>4} {'q':>4} {'nu':>3} {'measured':>10} {'theory':>10} {'r2':>9}  ok")
    for alpha in DECAY_ALPHAS:
        for p, q, nu in DECAY_CASES:
            rep = measure_decay_slope(DecayProbe(grid, alpha, p, q, nu))
            qs = "inf" if np.isinf(q) else f"{q:g}"
            print(f"{alpha:5g} {p:4g} {qs:>4} {nu:3g} {rep.measured_slope:10.5f} "
                  f"{rep.theoretical_slope:10.5f} {rep.r_squared:9.6f}  {rep.passed}")


if __name__ == "__main__":
    main()
