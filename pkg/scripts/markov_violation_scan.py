"""Scan the analytic qubit's 3-vs-2 time mismatch over (eps, gamma).

For the analytic dephasing qubit the mismatch P_2 - sum_x2 P_3 has the closed
form -(1/4)(-1)^(x3-x1) e^{-gamma (t3-t1)/2} sin[eps (t3-t2)] sin[eps (t2-t1)]:
zero iff eps = 0, i.e. iff the dephasing function is real.  The scan prints
the maximal |mismatch| per parameter point, cross-checked against the numeric
pipeline.
"""

import argparse

import numpy as np

from dephaser import (
    MarkovianAnalyticModel,
    MarkovianAnalyticProvider,
    SystemPreparation,
    TimeGrid,
    fourier_mub,
    joint_distribution,
)
from dephaser.classicality import markov_qubit_violation_closed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps-max", type=float, default=2.0)
    ap.add_argument("--gamma-max", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=9)
    ap.add_argument("--times", type=float, nargs=3, default=(0.4, 1.1, 2.3))
    args = ap.parse_args()

    t1, t2, t3 = sorted(args.times)
    prep = SystemPreparation.maximally_mixed(2)
    meas = fourier_mub(2)

    print(f"times = ({t1}, {t2}, {t3})")
    print("eps      gamma    max|mismatch|  numeric-vs-closed")
    for eps_v in np.linspace(0.0, args.eps_max, args.steps):
        for gam_v in np.linspace(0.0, args.gamma_max, args.steps):
            model = MarkovianAnalyticModel(
                np.array([[0.0, eps_v], [-eps_v, 0.0]]),
                np.array([[0.0, gam_v], [gam_v, 0.0]]),
            )
            prov = MarkovianAnalyticProvider(model)
            p3 = joint_distribution(prov, prep, meas, TimeGrid(0.0, (t1, t2, t3))).as_array()
            p2 = joint_distribution(prov, prep, meas, TimeGrid(0.0, (t1, t3))).as_array()
            worst = 0.0
            dev = 0.0
            for x1 in range(2):
                for x3 in range(2):
                    numeric = p2[x1, x3] - p3[x1, :, x3].sum()
                    closed = markov_qubit_violation_closed(eps_v, gam_v, x3, x1, t3, t2, t1)
                    worst = max(worst, abs(numeric))
                    dev = max(dev, abs(numeric - closed))
            print(f"{eps_v:7.3f}  {gam_v:7.3f}  {worst:12.6e}  {dev:9.2e}")


if __name__ == "__main__":
    main()
