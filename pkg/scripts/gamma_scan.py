"""How the qubit decay rate gamma moves the headline numbers at the K = 1 trajectory points.

The headline photon number, g2(0) and R, and whether the trajectory points
are local g2 minima, all depend on gamma; this prints them side by side.

    python scripts/gamma_scan.py --gammas 0.1 0.3 0.5 0.7 1.0
"""

import argparse
import math

from hybrid_blockade.analytics import Branch, hpb_params
from hybrid_blockade.model import SystemParams
from hybrid_blockade.solver import radiance_witness, solve_point


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gammas", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0])
    ap.add_argument("--step", type=float, default=0.02)
    args = ap.parse_args()

    print(f"{'gamma':>6} {'<n>':>10} {'g2(0)':>10} {'R':>7}  local minimum (primary, secondary)")
    for gamma in args.gammas:
        base = SystemParams(g1=10.0, g2=10.0, eta=0.1, gamma=gamma)
        p = base.replace(Delta=math.sqrt(2 / 3) * 10, delta=4 * math.sqrt(2 / 3) * 10)
        obs = solve_point(p)[1]
        flags = []
        for branch in Branch:
            q = hpb_params(1.0, branch, base)
            g2 = solve_point(q)[1].g2_zero
            nb = min(solve_point(q.replace(Delta=q.Delta * f, delta=q.delta * f))[1].g2_zero
                     for f in (1 - args.step, 1 + args.step))
            flags.append("yes" if g2 < nb else "no")
        print(f"{gamma:6.2f} {obs.mean_photon:10.3e} {obs.g2_zero:10.3e} {radiance_witness(p):7.3f}  {', '.join(flags)}")


if __name__ == "__main__":
    main()
