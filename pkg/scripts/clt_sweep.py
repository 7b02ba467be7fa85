"""Monte Carlo W1 sweep on cycles with c = ceil(sqrt m); writes a CSV."""
import argparse
import sys

from monoclt import verify


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="100,400,1600,6400")
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=8)
    ap.add_argument("-o", "--out", default="clt_sweep.csv")
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = verify.sweep("cycle", sizes, "sqrt", "monte-carlo", samples=args.samples, seed=args.seed)
    with open(args.out, "w") as fh:
        fh.write(verify.rows_to_csv(rows))
    for r in rows:
        print(f"m={r['m']:>6} c={r['c']:>4} W1={r['w1']:.4f} bound={r['w1_bound']:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
