"""Observables along both hybrid-blockade trajectories as the coupling ratio K varies.

    python scripts/coupling_asymmetry.py --gamma 1.0
"""

import argparse

import numpy as np

from hybrid_blockade.model import SystemParams
from hybrid_blockade.sweep import run_hpb_track
from hybrid_blockade.validation import trajectory_minimum_margins


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--K", type=float, nargs="+", default=[1.0, 1.5, 2.0, 2.5, 3.0])
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--step", type=float, default=0.02, help="relative Delta perturbation for the minimum test")
    args = ap.parse_args()

    base = SystemParams(g1=10.0, g2=10.0, eta=0.1, gamma=args.gamma)
    print(f"{'branch':>9} {'K':>5} {'Delta/g1':>9} {'delta/g1':>9} {'<n>':>10} {'g2(0)':>10} {'R':>7}")
    for branch in ("primary", "secondary"):
        for row in run_hpb_track(args.K, branch, base).rows:
            if row.error and row.params is None:
                print(f"{branch:>9} {row.x:5.2f}  {row.error}")
                continue
            p = row.params
            print(f"{branch:>9} {row.x:5.2f} {p.Delta / p.g1:9.4f} {p.delta / p.g1:9.4f} "
                  f"{row.mean_photon:10.3e} {row.g2_zero:10.3e} {row.radiance:7.3f}")

    print(f"\nlocal g2 minimum under +-{args.step:.0%} Delta (delta/Delta fixed):")
    for K, branch, g2, nb in trajectory_minimum_margins(base, args.K, args.step):
        print(f"{branch:>9} {K:5.2f}  g2={g2:.3e}  best neighbour={nb:.3e}  {'yes' if g2 < nb else 'NO'}")


if __name__ == "__main__":
    main()
