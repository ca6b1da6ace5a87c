#!/usr/bin/env python3
"""Degree sweeps m = 1..60 for each dependence level and sample size: the
per-degree bias/variance/MSE series behind the smoothing trade-off plots.

Writes one CSV per (theta, n) combination into the output directory; plotting
is left to external tools.
"""

import argparse
import pathlib
import sys

from tailrho.cli import main as tailrho_main

THETAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
NS = (50, 200)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=float, default=1.0)
    parser.add_argument("--m-max", type=int, default=60, dest="m_max")
    parser.add_argument("--reps", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out-dir", default="results")
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for theta in THETAS:
        for n in NS:
            out = out_dir / f"sweep_theta{theta:+.1f}_n{n}_p{args.p:g}.csv"
            code = tailrho_main(
                [
                    "sweep",
                    f"--theta={theta}",
                    "--n", str(n),
                    "--p", str(args.p),
                    "--m-max", str(args.m_max),
                    "--reps", str(args.reps),
                    "--seed", str(args.seed),
                    "--out", str(out),
                ]
            )
            if code != 0:
                return code
            print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
