"""Counting-query case study: how many Laplace-noised queries can be
answered before membership advantage exceeds a target, under the exact
composed trade-off curve versus a standard (eps, delta) accounting with
optimal pure-DP composition.

Runs the `queries` subcommand for several values of the standard
analysis's delta slack and prints the feasible-k frontier.
"""

import argparse
import contextlib
import io
import json
import sys

from fdprisk import cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", type=float, default=5.0,
                    help="Laplace scale per query (sensitivity 1)")
    ap.add_argument("--k-max", type=int, default=20)
    ap.add_argument("--base", type=float, default=0.1)
    ap.add_argument("--target-adv", type=float, default=0.2)
    ap.add_argument("--deltas", type=str, default="1e-12,1e-9,1e-6")
    args = ap.parse_args(argv)

    print("delta_std,max_feasible_k_fdp,max_feasible_k_standard")
    for delta in args.deltas.split(","):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(["queries", "--b", str(args.b),
                             "--k-max", str(args.k_max),
                             "--base", str(args.base),
                             "--target-adv", str(args.target_adv),
                             "--delta-std", delta, "--format", "json"])
        if code != 0:
            print(f"{delta},error,error", file=sys.stderr)
            continue
        payload = json.loads(buf.getvalue())
        print(f"{delta},{payload['max_feasible_k_fdp']},"
              f"{payload['max_feasible_k_standard']}")


if __name__ == "__main__":
    main()
