"""Largest Lyapunov exponent as a function of the prey growth rate.

Writes a CSV (r, lambda1); positive values flag chaotic parameter bands.
"""

import argparse

from rickerpp import ModelParams, State, lyapunov1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-from", type=float, default=3.25)
    ap.add_argument("--r-to", type=float, default=3.50)
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--transient", type=int, default=20_000)
    ap.add_argument("--b0", type=float, default=4.0)
    ap.add_argument("--gamma", type=float, default=1.5)
    ap.add_argument("--c", type=float, default=0.9)
    ap.add_argument("--s", type=float, default=0.1)
    ap.add_argument("--out", default="lyapunov.csv")
    args = ap.parse_args()

    base = ModelParams(r=args.r_from, b0=args.b0, gamma=args.gamma,
                       c=args.c, s=args.s)
    with open(args.out, "w") as fh:
        fh.write("r,lambda1\n")
        for k in range(args.steps):
            r = args.r_from + (args.r_to - args.r_from) * k / (args.steps - 1)
            est = lyapunov1(base.with_r(r), State(1.0, 1.0), n=args.n,
                            transient=args.transient)
            fh.write(f"{r:.17g},{est.lambda1:.17g}\n")
    print(f"wrote {args.out} ({args.steps} parameter values)")


if __name__ == "__main__":
    main()
