"""Measure the inequality and estimate constants across grid resolutions."""

import argparse

from sqgvar.lab import GROWTH_LIMIT, stability_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grids", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--no-estimates", action="store_true", help="skip the solver-based constants")
    args = ap.parse_args()
    rep = stability_sweep(args.grids, args.seed, include_estimates=not args.no_estimates)
    print(f"{'constant':<16}" + "".join(f"{'N=' + str(n):>12}" for n in rep.grids) + f"{'growth':>9}")
    for row in rep.rows:
        print(f"{row.name:<16}" + "".join(f"{row.values[n]:12.6f}" for n in rep.grids)
              + f"{row.growth:9.4f}" + ("" if row.stable else f"  exceeds {GROWTH_LIMIT:g}x"))


if __name__ == "__main__":
    main()
