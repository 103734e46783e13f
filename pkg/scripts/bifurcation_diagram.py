"""Attractor samples over a range of prey growth rates.

Writes a CSV (r, x, y, period) suitable for plotting the period-doubling
cascade into chaos.
"""

import argparse
import sys

from rickerpp import ModelParams, State, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-from", type=float, default=2.5)
    ap.add_argument("--r-to", type=float, default=3.6)
    ap.add_argument("--steps", type=int, default=400)
    ap.add_argument("--samples", type=int, default=128)
    ap.add_argument("--b0", type=float, default=4.0)
    ap.add_argument("--gamma", type=float, default=1.5)
    ap.add_argument("--c", type=float, default=0.9)
    ap.add_argument("--s", type=float, default=0.1)
    ap.add_argument("--out", default="bifurcation.csv")
    args = ap.parse_args()

    params = ModelParams(r=args.r_from, b0=args.b0, gamma=args.gamma,
                         c=args.c, s=args.s)
    rows = sweep(params, args.r_from, args.r_to, args.steps,
                 M=args.samples, start=State(1.0, 1.0), with_period=True)
    with open(args.out, "w") as fh:
        fh.write("r,x,y,period\n")
        for row in rows:
            if row.error:
                print(f"r = {row.r}: {row.error}", file=sys.stderr)
                continue
            p = "" if row.period is None else row.period
            for st in row.attractor_samples:
                fh.write(f"{row.r:.17g},{st.x:.17g},{st.y:.17g},{p}\n")
    print(f"wrote {args.out} ({args.steps} parameter values)")


if __name__ == "__main__":
    main()
