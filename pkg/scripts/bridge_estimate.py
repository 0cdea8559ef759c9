"""Monte Carlo estimate of the two-point base probability, pushed through the bridge bound.

The output is an estimate, not a certificate.
"""
import argparse

from diagbase import bounds as B
from diagbase.catalog import aut_action


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="A5")
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    a = aut_action(args.group)
    est = B.estimate_p(a, args.k + 1, samples=args.samples, seed=args.seed)
    bound = B.pq_bridge(est.value, args.k)
    print(f"{a.name} k={args.k}: {est.hits}/{est.samples} random points form a base with D")
    print(f"implied Q_k upper bound {bound} (~{float(bound):.4f}), not certifying")


if __name__ == "__main__":
    main()
