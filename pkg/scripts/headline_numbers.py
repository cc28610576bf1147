"""Print the headline coherent-information values and certified constants."""

import math
import time

from attenuant import entropy as ent
from attenuant import majorization as maj
from attenuant import schemes as sch


def main():
    t0 = time.perf_counter()
    rows = [
        ("single-photon environment, eta=1/3, lam=1/2", sch.scheme1_icoh(1 / 3, 0.5).icoh),
        ("single-photon environment, best eta at lam=1/2", sch.scheme1_max(0.5)[1]),
        ("superposition environment, n=54", sch.scheme2_icoh(54).icoh),
        ("Fock-branch certified floor, n>=3", 32 / (6561 * math.log(2))),
        ("small-lambda certified limit", maj.ASYMPTOTIC_CERTIFIED),
        ("certified constant near lam=1/2", ent.afw_interval().combined),
        ("g(1/2)", ent.g(0.5)),
    ]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value:.6g}")
    print(f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
