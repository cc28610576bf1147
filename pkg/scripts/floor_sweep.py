"""Sweep the certified capacity floor over lambda and print the weakest points per branch."""

import argparse

import numpy as np

from attenuant import schemes as sch


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=2001)
    ap.add_argument("--lambda-min", type=float, default=0.005)
    ap.add_argument("--eps", type=float, default=sch.DEFAULT_EPS)
    args = ap.parse_args()

    lams = np.linspace(args.lambda_min, 1.0, args.points)
    results = sch.floor_sweep(lams, args.eps)
    by_branch = {}
    for r in results:
        cur = by_branch.get(r.branch)
        if cur is None or r.value < cur.value:
            by_branch[r.branch] = r
    for branch, r in sorted(by_branch.items(), key=lambda kv: kv[1].value):
        print(f"{branch:<14} min {r.value:.6g} at lam={r.lam:.5f} ({r.method})")


if __name__ == "__main__":
    main()
