"""Complete graphs at c=2: W1 stays bounded away from zero as m grows."""
import argparse
import sys

from monoclt import verify


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="10,20,40")
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=9)
    ap.add_argument("-o", "--out", default="dense_counterexample.csv")
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = verify.sweep("complete", sizes, "const:2", "monte-carlo", samples=args.samples, seed=args.seed)
    with open(args.out, "w") as fh:
        fh.write(verify.rows_to_csv(rows))
    for r in rows:
        print(f"n={r['n']:>3} m={r['m']:>4} W1={r['w1']:.4f} remark_rate={r['remark_rate']:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
