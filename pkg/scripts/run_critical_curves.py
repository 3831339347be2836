#!/usr/bin/env python3
"""Tabulate critical resource means over a grid of offspring means.

Writes one CSV per claim law into the output directory and prints a small
summary of the band between the smallest-first and largest-first critical
values (the region where the choice of policy decides survival).

Example:
    python3 scripts/run_critical_curves.py --out results/curves
"""

import argparse
import math
from pathlib import Path

from rdbp import ScaledBeta, Uniform, critical_curve


def geometric_grid(lo: float, hi: float, points: int) -> list[float]:
    step = (math.log(hi) - math.log(lo)) / (points - 1)
    return [math.exp(math.log(lo) + step * i) for i in range(points)]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="curves", help="output directory")
    ap.add_argument("--m-min", type=float, default=1.1)
    ap.add_argument("--m-max", type=float, default=50.0)
    ap.add_argument("--points", type=int, default=40)
    args = ap.parse_args()

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = geometric_grid(args.m_min, args.m_max, args.points)

    laws = {
        "uniform_0_2": Uniform(0.0, 2.0),
        "beta_2_5": ScaledBeta(2.0, 5.0, 1.0),
        "beta_5_2": ScaledBeta(5.0, 2.0, 1.0),
        "beta_2_2_scale2": ScaledBeta(2.0, 2.0, 2.0),
    }

    for name, claim in laws.items():
        rows = critical_curve(claim, grid)
        path = outdir / f"{name}.csv"
        with path.open("w") as fh:
            fh.write("m,r_wc,r_uc,r_sc\n")
            for m, r_wc, r_uc, r_sc in rows:
                fh.write(f"{m:.10g},{r_wc:.10g},{r_uc:.10g},{r_sc:.10g}\n")
        first, last = rows[0], rows[-1]
        print(f"{name}: wrote {path}")
        print(
            f"  policy-sensitive band at m={first[0]:.3g}: "
            f"[{first[1]:.4g}, {first[3]:.4g}]  ->  m={last[0]:.3g}: "
            f"[{last[1]:.4g}, {last[3]:.4g}]"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
