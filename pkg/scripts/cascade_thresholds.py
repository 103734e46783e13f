"""Locate the period-doubling cascade thresholds and the chaos onset.

Prints each doubling parameter (1->2, 2->4, 4->8, 8->16) and the edge
where periodicity gives way to a positive Lyapunov exponent.
"""

import argparse
import json

from rickerpp import (
    ModelParams,
    State,
    find_chaos_onset,
    find_doubling_threshold,
    flip_coefficients,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b0", type=float, default=4.0)
    ap.add_argument("--gamma", type=float, default=1.5)
    ap.add_argument("--c", type=float, default=0.9)
    ap.add_argument("--s", type=float, default=0.1)
    args = ap.parse_args()

    params = ModelParams(r=1.0, b0=args.b0, gamma=args.gamma,
                         c=args.c, s=args.s)
    start = State(1.0, 1.0)
    flip = flip_coefficients(params)
    brackets = [
        (1, flip.r_star - 0.05, flip.r_star + 0.05),
        (2, 3.05, 3.17),
        (4, 3.20, 3.27),
        (8, 3.262, 3.281),
    ]
    out = {"r_star": flip.r_star}
    for from_p, lo, hi in brackets:
        out[f"doubling_{from_p}_to_{2 * from_p}"] = find_doubling_threshold(
            params, lo, hi, from_p, start=start)
    out["chaos_onset"] = find_chaos_onset(params, 3.277, 3.30, start=start)
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
