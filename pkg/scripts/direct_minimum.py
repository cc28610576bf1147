"""Smallest exact coherent information of the Fock-environment scheme on its selector intervals."""

import argparse

from attenuant import majorization as maj
from attenuant import schemes as sch


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=200)
    ap.add_argument("--points", type=int, default=50)
    args = ap.parse_args()

    best = None
    for n in range(3, args.nmax + 1):
        for lam in maj.lambda_grid(n, args.points):
            v = sch.main_scheme_icoh(n, float(lam), simulate=False).icoh
            if best is None or v < best[0]:
                best = (v, n, float(lam))
    v, n, lam = best
    print(f"minimum {v:.6f} at n={n}, lam={lam:.6f}")


if __name__ == "__main__":
    main()
